import sys
from pathlib import Path

from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

# Exact arithmetic and sympy oracles have uneven run times.
settings.register_profile("exact", deadline=None, max_examples=50)
settings.load_profile("exact")
