import json

import pytest

from fewnomials.errors import InconclusiveBox
from fewnomials.harness import (
    MODES,
    SCHEMA_VERSION,
    InstanceRecord,
    RunConfig,
    independent_prefixes,
    instance_seed,
    random_fewnomial,
    random_independent_fewnomial,
    random_oracle_fewnomial,
    random_phi,
    random_system,
    search_maximizer,
    verify_batch,
    verify_instance,
)


def test_instance_seed_is_stable():
    assert instance_seed(0, 0) == instance_seed(0, 0)
    assert instance_seed(0, 0) != instance_seed(0, 1)
    assert instance_seed(0, 0) != instance_seed(1, 0)
    assert 0 <= instance_seed(2**70, 5) < 2**64


def test_instance_seed_value():
    import hashlib

    digest = hashlib.blake2b(b"fewnomials:7:3", digest_size=8).digest()
    assert instance_seed(7, 3) == int.from_bytes(digest, "big")


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig(count=0).validate()
    with pytest.raises(ValueError):
        RunConfig(mode="nope").validate()
    with pytest.raises(ValueError):
        RunConfig(numerator_range=(3, 1)).validate()
    with pytest.raises(ValueError):
        RunConfig(coefficient_range=(0, 0)).validate()


def test_config_json_roundtrip():
    cfg = RunConfig(mode="lemma4", count=7, t=4, numerator_range=(0, 8), seed=42)
    assert RunConfig.from_json(json.loads(json.dumps(cfg.to_json()))) == cfg


def test_generators_are_deterministic():
    cfg = RunConfig(t=4, integer_exponents=True)
    for gen in (random_system, random_fewnomial, random_oracle_fewnomial, random_phi):
        assert gen(cfg, 12345) == gen(cfg, 12345)


def test_integer_exponent_systems_reduce_to_rational_exponents():
    from fewnomials.reduction import monomial_change, normalize_trinomial

    cfg = RunConfig(t=3, numerator_range=(0, 5), integer_exponents=True)
    s = random_system(cfg, 1)
    assert all(e.denominator == 1 for _, a, b in s.f_terms + s.g_terms for e in (a, b))
    F = monomial_change(normalize_trinomial(s)).F
    assert F.t == 3


def test_independent_prefixes():
    from fewnomials.fewnomial import FewnomialFunction

    dependent = FewnomialFunction.from_pairs([(1, 0, 0), (1, 1, 0), (1, 0, 1)])
    assert not independent_prefixes(dependent)
    F = random_independent_fewnomial(RunConfig(t=5, integer_exponents=True, numerator_range=(0, 8)), 3)
    assert independent_prefixes(F)


def test_random_phi_meets_parity():
    for i in range(20):
        phi = random_phi(RunConfig(max_degree=8), instance_seed(4, i))
        assert phi.satisfies_parity
        assert phi.rational_map().degree <= 8


@pytest.mark.parametrize("mode", MODES)
def test_records_reproduce(mode):
    cfg = RunConfig(mode=mode, count=2, seed=5, max_degree=4, numerator_range=(0, 5))
    for i in range(2):
        a, b = verify_instance(cfg, i), verify_instance(cfg, i)
        assert a.comparable() == b.comparable()
        assert a.schema == SCHEMA_VERSION
        assert a.status in ("pass", "inconclusive")


def test_record_json_roundtrip():
    rec = verify_instance(RunConfig(mode="theorem2", seed=1), 0)
    assert InstanceRecord.from_json(json.loads(json.dumps(rec.to_json()))).comparable() == rec.comparable()


def test_batch_writes_jsonl(tmp_path):
    out = tmp_path / "run.jsonl"
    cfg = RunConfig(mode="theorem1", count=5, seed=3, out=str(out))
    summary = verify_batch(cfg)
    assert summary.total == 5 and summary.violations == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 5
    assert all(json.loads(line)["schema"] == SCHEMA_VERSION for line in lines)
    # append-only
    verify_batch(cfg)
    assert len(out.read_text().splitlines()) == 10


def test_batch_rejects_empty_config():
    with pytest.raises(ValueError):
        verify_batch(RunConfig(count=0))


def test_workers_do_not_change_records():
    cfg = RunConfig(mode="theorem2", count=6, seed=8)
    serial = [r.comparable() for r in verify_batch(cfg).records]
    cfg.workers = 2
    assert [r.comparable() for r in verify_batch(cfg).records] == serial


def test_violation_aborts_with_reproducer(tmp_path, monkeypatch):
    import fewnomials.harness as h

    def broken(cfg, rec, seed):
        rec.count = 99
        rec.verdicts["count"] = False

    monkeypatch.setitem(h._VERIFIERS, "theorem1", broken)
    repro = tmp_path / "repro.json"
    summary = verify_batch(RunConfig(count=4, reproducer=str(repro)))
    assert summary.aborted and summary.violations == 1 and summary.total == 1
    data = json.loads(repro.read_text())
    assert data["record"]["count"] == 99 and data["config"]["count"] == 4


def test_inconclusive_is_not_a_violation(monkeypatch):
    import fewnomials.harness as h

    def undecided(cfg, rec, seed):
        raise InconclusiveBox(3, (0, 1), "test")

    monkeypatch.setitem(h._VERIFIERS, "theorem1", undecided)
    summary = verify_batch(RunConfig(count=3))
    assert summary.inconclusive == 3 and summary.violations == 0 and not summary.aborted


def test_search_small_budget():
    rec = search_maximizer(RunConfig(t=3, seed=2), 30)
    assert rec.count is not None and rec.count >= 1
    assert rec.count <= 5
    with pytest.raises(ValueError):
        search_maximizer(RunConfig(t=3), 0)
