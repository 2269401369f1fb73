import hashlib
import json
import math

import pytest

from siegelbessel import harness
from siegelbessel.harness import (
    IngestError,
    VerificationTask,
    emit_eigenvalues,
    fundamental_volume,
    ingest,
    petersson_numeric,
    saito_kurokawa_eigen,
    sk_control_detail,
    upsilon20,
    validate_eigen_json,
    verify_boecherer,
)
from siegelbessel.siegel.hecke import eigenvalue
from siegelbessel.siegel.ring import eisenstein, igusa_cusp_generators


@pytest.fixture()
def cache(tmp_path, monkeypatch):
    d = tmp_path / "cache"
    d.mkdir()
    monkeypatch.setenv(harness.CACHE_ENV, str(d))
    return d


def sk_doc():
    return saito_kurokawa_eigen(10, 60).to_json()


# -- ingestion ------------------------------------------------------------------------


def test_file_round_trip(tmp_path, cache):
    src = tmp_path / "chi10.json"
    data = saito_kurokawa_eigen(10, 60)
    emit_eigenvalues(data, src)
    res = ingest(str(src), cache=cache)
    assert res.origin == "file"
    assert res.data.eigenvalues == data.eigenvalues
    assert res.digest == hashlib.sha256(src.read_bytes()).hexdigest()
    assert (cache / f"{res.digest}.json").read_bytes() == src.read_bytes()


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("level"),
    lambda d: d.update(level=0),
    lambda d: d.update(weight=[10]),
    lambda d: d["primes"].update({"x": {"lam_p": 1}}),
    lambda d: d["primes"]["2"].pop("lam_p"),
    lambda d: d["primes"]["2"].update(lam_p=1.5),
    lambda d: d.update(atkin_lehner={"3": 2}),
])
def test_schema_errors(mutate):
    d = sk_doc()
    validate_eigen_json(d)
    mutate(d)
    with pytest.raises(IngestError):
        validate_eigen_json(d)


def test_invalid_json_and_missing_file(tmp_path, cache):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(IngestError):
        ingest(str(bad), cache=cache)
    with pytest.raises(IngestError):
        ingest(str(tmp_path / "absent.json"), cache=cache)


def test_url_is_cached_and_offline_works(cache, monkeypatch):
    raw = json.dumps(sk_doc()).encode()
    calls = []

    def fake_fetch(url):
        calls.append(url)
        return raw

    monkeypatch.setattr(harness, "_fetch", fake_fetch)
    url = "https://example.org/chi10.json"
    first = ingest(url, cache=cache)
    assert first.origin == "network" and calls == [url]

    def no_network(url):
        raise AssertionError("network used on a cache hit")

    monkeypatch.setattr(harness, "_fetch", no_network)
    second = ingest(url, offline=True, cache=cache)
    assert second.origin == "cache" and second.digest == first.digest
    with pytest.raises(IngestError):
        ingest("https://example.org/other.json", offline=True, cache=cache)


def test_network_failure_is_reported(cache, monkeypatch):
    def broken(url):
        raise OSError("unreachable")

    monkeypatch.setattr(harness, "_fetch", broken)
    with pytest.raises(IngestError):
        ingest("https://example.org/x.json", cache=cache)


def test_bundled_data_agrees_with_hecke_operators(cache):
    chi10, chi12 = igusa_cusp_generators(60)
    for name, F in (("chi10", chi10), ("chi12", chi12)):
        data = ingest(name, cache=cache).data
        for p in (2, 3):
            assert data.eigenvalues[p][0] == eigenvalue(F, p)
    assert ingest("chi10", cache=cache).data.eigenvalues[2][0] == 240


def test_bundled_upsilon20_agrees_with_hecke_operators(cache):
    data = ingest("upsilon20", cache=cache).data
    assert (data.weight.k, data.weight.r, data.level) == (20, 0, 1)
    assert data.eigenvalues[2] == (-840960, 248256200704)
    assert data.eigenvalues[3][0] == 346935960
    assert data.eigenvalues[3][1] == -452051040393665991
    assert data.eigenvalues[5][0] == -5232247240500
    F = upsilon20(144)
    assert eigenvalue(F, 2) == -840960
    assert eigenvalue(F, 3) == 346935960


# -- tasks and reports ---------------------------------------------------------------


def test_task_validation():
    with pytest.raises(ValueError):
        VerificationTask("chi10", "chi10", (10, 0), 2, [])
    with pytest.raises(ValueError):
        VerificationTask("chi10", "chi10", (10, 0), 9, [])
    with pytest.raises(ValueError):
        VerificationTask("chi10", "chi10", (10, 0), 3, [((23, 0), (4, 0))])
    t = VerificationTask("chi10", "chi10", (10, 0), 3, [((4, 0), (7, 0))])
    assert VerificationTask.from_json(t.to_json()) == t


def test_task_from_discs():
    t = VerificationTask.from_json({"form": "chi12", "weight": [12, 0], "discs": [3, 4, 23], "characters": {"23": 1}})
    assert t.pairs == [((4, 0), (3, 0)), ((23, 1), (3, 0))]
    assert t.eigen == "chi12"


def test_level_above_one_is_refused(tmp_path, cache):
    doc = sk_doc()
    doc["level"] = 3
    src = tmp_path / "level3.json"
    src.write_text(json.dumps(doc))
    t = VerificationTask("chi10", str(src), (10, 0), 3, [((4, 0), (7, 0))])
    with pytest.raises(NotImplementedError):
        verify_boecherer(t, cache=cache)


def sk_task(**kw):
    args = dict(prime_bound=400, tolerance=0.05)
    args.update(kw)
    return VerificationTask("chi12", "chi12", (12, 0), 1, [((4, 0), (3, 0)), ((23, 1), (3, 0))], **args)


def test_saito_kurokawa_trivial_pair_matches(cache):
    rep = verify_boecherer(sk_task(), cache=cache)
    assert rep.kind == "negative-control"
    assert rep.form_info["saito_kurokawa"] is True
    first = rep.pairs[0]
    assert first.measured == pytest.approx(7.12717920542, rel=1e-10)
    assert first.discrepancy < 1e-10


def test_saito_kurokawa_control_mismatch(cache):
    rep = verify_boecherer(sk_task(), cache=cache)
    ctrl = rep.pairs[1]
    assert ctrl.measured == 0
    assert ctrl.discrepancy == pytest.approx(1.0)
    assert rep.verdict == "mismatch-as-expected"
    detail = sk_control_detail(12, 23, 1)
    assert detail["prediction"] == 0.0
    assert detail["root_number(f x AI)"] == -1
    assert abs(detail["L(1/2, f x AI)"]) < 1e-9


def test_report_is_deterministic_and_scale_free(cache):
    rep = verify_boecherer(sk_task(), cache=cache)
    a = rep.dumps()
    b = verify_boecherer(sk_task(), cache=cache).dumps()
    assert a == b
    c = verify_boecherer(sk_task(scale=7), cache=cache)
    for x, y in zip(c.pairs, rep.pairs):
        assert x.measured == pytest.approx(y.measured, rel=1e-12)
    doc = json.loads(a)
    assert set(doc) >= {"task", "kind", "form", "periods", "lvalues", "per_pair", "verdict", "achievable_tolerance"}


# -- Petersson norm ----------------------------------------------------------------------


def test_fundamental_domain_volume():
    vol, err = fundamental_volume()
    assert abs(vol - math.pi**3 / 270) < 4 * err
    assert err < 5e-4


def test_petersson_positive_and_quadratic():
    chi10 = igusa_cusp_generators(60)[0]
    v, e = petersson_numeric(chi10, samples=2048, replicates=4)
    assert v > 0 and e < v
    v2, _ = petersson_numeric(chi10.scale(3), samples=2048, replicates=4)
    assert v2 == pytest.approx(9 * v, rel=1e-12)
    with pytest.raises(ValueError):
        petersson_numeric(eisenstein(4, 20))


def test_petersson_stable_when_samples_quadruple():
    chi10 = igusa_cusp_generators(60)[0]
    v1, e1 = petersson_numeric(chi10, samples=1024, replicates=8)
    v2, e2 = petersson_numeric(chi10, samples=4096, replicates=8, seed=100)
    assert abs(v1 - v2) <= 3 * math.hypot(e1, e2)


def test_root_numbers_follow_from_the_spinor_sign(cache):
    t = VerificationTask("upsilon20", "upsilon20", (20, 0), 1, [((23, 1), (3, 0)), ((7, 0), (3, 0))], prime_bound=300)
    lv = verify_boecherer(t, cache=cache).to_json()["lvalues"]
    assert lv["L(pi)"]["root_number"] == [1.0, 0.0]
    for name, v in lv.items():
        assert v["root_number"] == [1.0, 0.0], name
        assert v["scale_check"] is not None
    assert lv["L(pi x chi_-7)"]["scale_check"] < 1e-2
