import math

import pytest

import depbounds as db


def test_marginals():
    u = db.MarginalDist.uniform(0.0, 1.0)
    assert u.quantile(0.5) == pytest.approx(0.5)
    assert db.MarginalDist.point_mass(3.0).quantile(0.9) == 3.0
    assert db.diamond_cdf(u, u, 0.5) == pytest.approx(0.75)
    assert db.diamond_quantile(u, u, 0.75) == pytest.approx(0.5)
    assert db.gini_m(u, u, 1.0) == pytest.approx(1.0 / 3)
    assert db.gini_m(u, u, 0.5) == pytest.approx(8.0 / 15)
    assert db.m2_cross(u, u) == pytest.approx(1.0 / 6)
    with pytest.raises(ValueError):
        u.quantile(1.5)


def test_marginal_parsing(tmp_path):
    m = db.parse_marginal("uniform:0,4")
    assert m.quantile(0.25) == pytest.approx(1.0)
    sample = tmp_path / "sample.txt"
    sample.write_text("0.1\n0.9\n0.5\n")
    e = db.parse_marginal(f"empirical:{sample}")
    assert e.quantile(0.5) == pytest.approx(0.5)


def test_sampling_deterministic():
    jd = db.with_uniform_marginals(db.Copula.parallel())
    a = db.sample(jd, 100, seed=7)
    b = db.sample(jd, 100, seed=7)
    assert a == b
    assert all(abs(abs(v - u) - 0.5) < 1e-14 for u, v in a)


def test_s_beta_quadrature_values():
    cp = db.with_uniform_marginals(db.Copula.comonotone(2))
    cm = db.with_uniform_marginals(db.Copula.countermonotone())
    params = db.FunctionalParams(method="quadrature")
    assert db.s_beta(cp, cp, params).value == pytest.approx(math.sqrt(2) / 3, abs=1e-12)
    expected = (math.sqrt(2) + math.log(1 + math.sqrt(2))) / (3 * math.sqrt(2))
    assert db.s_beta(cm, cp, params).value == pytest.approx(expected, abs=1e-10)


def test_energy_distance_windows():
    cp = db.with_uniform_marginals(db.Copula.comonotone(2))
    cm = db.with_uniform_marginals(db.Copula.countermonotone())
    par = db.with_uniform_marginals(db.Copula.parallel())
    params = db.FunctionalParams(method="quadrature")
    e1 = db.energy_distance(cm, cp, params).value
    e2 = db.energy_distance(cp, par, params).value
    assert 0.067 <= e1 <= 0.071
    assert 0.062 <= e2 <= 0.066
    assert e1 > e2
    assert db.energy_distance(cp, cp, params).value == 0.0


def test_monte_carlo_spherical():
    sph = db.with_uniform_marginals(db.Copula.spherical(2))
    params = db.FunctionalParams(method="mc", samples=200000, seed=5)
    est = db.s_beta(sph, sph, params)
    assert abs(est.value - math.pi / 6) < 4 * est.se


def test_bounds():
    ms = [db.MarginalDist.uniform(0.0, 1.0)] * 2
    assert db.lower_bound_s(ms, ms, 1.0) == pytest.approx(math.sqrt(2) / 3)
    assert db.upper_bound_s(ms, ms, 1.0) == pytest.approx(math.sqrt(1 / 3))
    value, sharp = db.sharp_upper_scc(2)
    assert value == pytest.approx(math.pi / 6)
    assert sharp
    assert db.lower_bound_score(2, 1.0) == pytest.approx(math.sqrt(2) / 4)
    rep = db.bounds_report(ms, ms, 1.0)
    assert rep.bounds_consistent()
    assert len(rep.upper) == 2


def test_discretize_and_symmetrize():
    cp = db.discretize(db.Copula.comonotone(2), 4)
    cm = db.discretize(db.Copula.countermonotone(), 4)
    sym = db.symmetrize(cp)
    assert sym == db.mix([(cp, 0.5), (cm, 0.5)])
    with pytest.raises(RuntimeError):
        db.discretize(db.Copula.spherical(2), 4)


def test_optimizer_matches_brute_force():
    ls = db.local_search(db.SearchProblem("max-scc", n=5, restarts=20, seed=11))
    bf = db.brute_force(db.SearchProblem("max-scc", n=5, seed=11))
    assert ls.best_value == pytest.approx(bf.best_value, abs=1e-12)
    mn = db.local_search(db.SearchProblem("min-scc", n=8, restarts=10, seed=2))
    assert mn.best.permutations == [list(range(8))]


def test_exact_atoms():
    dc = db.DiscreteCopula.from_permutations(2, [[0, 1]])
    jd = db.with_uniform_marginals(db.Copula.discrete(dc))
    est = db.s_beta(jd, jd, db.FunctionalParams(method="exact"))
    assert est.value == pytest.approx(math.sqrt(2) / 4, abs=1e-14)
    assert est.se == 0.0
    atoms = db.atoms_of(jd)
    assert len(atoms) == 2
