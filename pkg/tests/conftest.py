import pytest

from pgroups import catalog as cat


@pytest.fixture(scope="session")
def groups():
    """Session-wide builder cache so expensive groups and their caches are shared."""
    built = {}

    def get(name, **params):
        key = cat.instance_key(name, cat.resolve_params(name, params))
        if key not in built:
            built[key] = cat.catalog_build(name, **params)
        return built[key]

    return get
