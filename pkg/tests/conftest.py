import pytest

from toruscm import fixtures


@pytest.fixture(scope="session")
def tau_i():
    return fixtures.tau_i_torus()


@pytest.fixture(scope="session")
def tau_2pow14():
    return fixtures.tau_2pow14_torus()


@pytest.fixture(scope="session")
def zeta5_mirror():
    return fixtures.zeta5_mirror_data()


@pytest.fixture(scope="session")
def gaussian_cm():
    from toruscm.cm import cm_torus

    inp = fixtures.gaussian_cm_input()
    torus, e_m, g_m = cm_torus(inp)
    return {"input": inp, "torus": torus, "E": e_m, "G": g_m}


@pytest.fixture(scope="session")
def zeta5_cm():
    from toruscm.cm import cm_torus

    inp = fixtures.zeta5_cm_input()
    torus, e_m, g_m = cm_torus(inp)
    return {"input": inp, "torus": torus, "E": e_m, "G": g_m}


@pytest.fixture(scope="session")
def fixture_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("fixtures")
    fixtures.write_fixture_files(str(d))
    return d
