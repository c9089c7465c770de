import pytest

from ceer.coding import new_coding, new_merged
from ceer.derived import DerivedContext
from ceer.generators import builtin_ic_relations, full_relation, load_spec


@pytest.fixture(scope="session")
def full_nu():
    return full_relation()[1]


@pytest.fixture
def full_ctx(full_nu):
    # the dyadic sweep makes chi grow fast; 10**8 keeps 25 entries in reach
    return DerivedContext(new_coding(full_nu, fuel=10**8))


@pytest.fixture(scope="session")
def builtins():
    return builtin_ic_relations()


@pytest.fixture(scope="session")
def mod3():
    return load_spec("mod:3")


@pytest.fixture
def mod3_merged_ctx(mod3):
    return DerivedContext(new_merged(mod3.nu))
