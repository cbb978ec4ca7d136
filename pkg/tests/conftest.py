import pytest


@pytest.fixture(scope="session", autouse=True)
def _isolated_cache(tmp_path_factory):
    """Point the certificate cache at a session-scoped temp directory.

    Tests still benefit from within-session reuse, but never read or write
    the user's real cache.
    """
    import os
    path = tmp_path_factory.mktemp("cert-cache")
    old = os.environ.get("ADEGLAB_CACHE_DIR")
    os.environ["ADEGLAB_CACHE_DIR"] = str(path)
    import adeglab.cache
    adeglab.cache._shared = None     # rebuild the shared cache under the temp dir
    yield
    if old is None:
        os.environ.pop("ADEGLAB_CACHE_DIR", None)
    else:
        os.environ["ADEGLAB_CACHE_DIR"] = old
    adeglab.cache._shared = None
