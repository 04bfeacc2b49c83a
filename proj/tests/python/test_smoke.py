import json
import math

import numpy as np
import pytest

import adiabus as ab


def test_version():
    assert ab.__version__.count(".") == 2


def test_two_site_sector_matrix():
    h = ab.hamiltonian_dense(ab.j1j2_chain(2, 1.0, 0.0), ab.SectorSpec.magnetization(2, 1))
    np.testing.assert_array_equal(h, [[-1.0, 2.0], [2.0, -1.0]])
    e = ab.lowest_eigenvalues(ab.j1j2_chain(2, 1.0, 0.0), ab.SectorSpec.magnetization(2, 1), 2)
    np.testing.assert_allclose(e, [-3.0, 1.0], atol=1e-12)


def test_basis_ordering():
    assert ab.basis_states(ab.SectorSpec.magnetization(4, 2)) == [3, 5, 6, 9, 10, 12]


def test_lanczos_matches_numpy():
    model = ab.j1j2_chain(8, 1.0, 0.3)
    sector = ab.SectorSpec.magnetization(8, 4)
    dense = np.linalg.eigvalsh(ab.hamiltonian_dense(model, sector))
    np.testing.assert_allclose(ab.lowest_eigenvalues(model, sector, 3), dense[:3], atol=1e-9)


def test_sudden_quench():
    f = ab.fidelity(ab.join_protocol(3, 1.0, 0.0), 0.0, ab.SectorSpec.magnetization(3, 1))
    assert f == pytest.approx(math.sqrt(3) / 2, abs=1e-9)


def test_anneal_time_and_evolve():
    p = ab.join_protocol(5, 1.0, 0.2)
    sector = ab.default_sector(p)
    r = ab.find_anneal_time(p, sector)
    assert r.reached and r.fidelity_at_tau_star >= 0.9
    psi = ab.evolve(p, 3.0, ab.prepare_initial_state(p, sector))
    assert psi.norm() == pytest.approx(1.0, abs=1e-9)


def test_gap_scan_triangle():
    g = ab.gap_scan(lambda j2: ab.join_protocol(3, 1.0, j2), [1.0], [0.0, 1.0])
    assert g.shape == (1, 2)
    assert g[0, 0] == pytest.approx(4.0)
    assert abs(g[0, 1]) < 1e-9


def test_transport():
    p = ab.simultaneous_protocol(5, 1.0, 0.2)
    r = ab.transport_qubit(p, ab.BlochVector(1, 0, 0), 100.0)
    assert r.qubit_fidelity >= 0.98
    assert (r.input_site, r.output_site) == (5, 1)


def test_errors_carry_codes():
    with pytest.raises(ab.AdiabusError) as err:
        ab.basis_states(ab.SectorSpec.magnetization(3, 5))
    assert err.value.code == "InvalidSector"
    with pytest.raises(ab.AdiabusError) as err:
        ab.mg_dimer_state(5)
    assert err.value.code == "OddLength"


def test_run_config():
    cfg = {"experiment": "fidelity-curve", "N": 3, "J2": 0, "tau": [0]}
    assert ab.run_config(json.dumps(cfg)) == "tau,fidelity\n0,0.866025403784\n"
    with pytest.raises(ab.AdiabusError) as err:
        ab.run_config(json.dumps({"experiment": "anneal-time", "N": [9], "J2": []}))
    assert err.value.code == "ValidationError"
