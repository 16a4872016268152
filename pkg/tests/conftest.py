"""
Shared test configuration
"""

from hypothesis import settings

# Property tests draw the same examples on every run
settings.register_profile("hqdisk", derandomize=True, deadline=None, print_blob=True)
settings.load_profile("hqdisk")
