import pytest
from hypothesis import HealthCheck, settings

from zerosum import make_group

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SMALL_GROUPS = [[2], [3], [4], [5], [6], [2, 2], [2, 4], [3, 3], [2, 2, 2], [8], [2, 6], [4, 4], [2, 8], [16], [2, 2, 4]]


@pytest.fixture(params=SMALL_GROUPS, ids=lambda f: ",".join(map(str, f)))
def small_group(request):
    return make_group(request.param)
