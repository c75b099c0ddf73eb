"""Lower-bound witness, certificate validation, and bound assembly."""
import dataclasses
import json
import math

import numpy as np
import pytest

from transversal_cert.geom import DELTA_FP, GOLDEN_RATIO, satisfies_T3, width
from transversal_cert.certify import (
    BoundReport,
    InconsistentInputs,
    Inequality,
    LEMMA15_R1,
    LEMMA15_R2,
    PENTAGON_CIRCUMRADIUS,
    PairGrid,
    assemble_bound,
    enumerate_pair_grid,
    extremal_pentagon,
    inequality_chain,
    load_certificate,
    pentagon_lower_bound,
    synthetic_certificate,
    validate_certificate,
    verify_part_a,
)
from transversal_cert.search import Certificate, RoundStats, initial_cube_count


# ---------------------------------------------------------------------------
# lower-bound witness


class TestPentagon:
    def test_triples_fit_in_unit_slabs(self):
        ps = extremal_pentagon()
        assert satisfies_T3(ps, 1.0 + DELTA_FP)

    def test_full_width_is_one_plus_sqrt5(self):
        assert width(extremal_pentagon()) == pytest.approx(
            1.0 + math.sqrt(5.0), abs=1e-12
        )

    def test_lower_bound_is_golden_ratio(self):
        assert pentagon_lower_bound() == pytest.approx(GOLDEN_RATIO, abs=1e-12)

    def test_scaling_past_one_breaks_a_triple(self):
        assert not satisfies_T3(extremal_pentagon(scale=1.001), 1.0 + DELTA_FP)

    def test_circumradius(self):
        ps = extremal_pentagon()
        norms = [math.hypot(p.x, p.y) for p in ps]
        assert norms == pytest.approx([PENTAGON_CIRCUMRADIUS] * 5)


def test_part_a_spacing_check():
    assert verify_part_a()


# ---------------------------------------------------------------------------
# inequality chain


class TestInequalities:
    def test_all_hold_with_frozen_values(self):
        chain = inequality_chain()
        assert [q.holds for q in chain] == [True, True, True]
        lhs = [q.lhs for q in chain]
        assert lhs[0] == pytest.approx(1.6330157849420237, abs=1e-12)
        assert lhs[1] == pytest.approx(1.6412218944140937, abs=1e-12)
        assert lhs[2] == pytest.approx(0.004908738521234052, abs=1e-15)
        assert [q.rhs for q in chain] == [1.635, 1.645, 0.005]

    def test_closed_forms(self):
        chain = inequality_chain()
        tau = GOLDEN_RATIO
        assert chain[0].lhs == (1.635 / 1.62) * tau
        assert chain[1].lhs == (1.635 / (0.995 * 1.62)) * tau
        assert chain[2].lhs == 3.0 * math.pi / 1920.0

    def test_huge_slack_breaks_chain(self):
        chain = inequality_chain(delta_fp=0.5)
        assert not any(q.holds for q in chain)


# ---------------------------------------------------------------------------
# pair grid


class TestPairGrid:
    def test_desk_grid_count(self):
        pairs = enumerate_pair_grid(PairGrid(step=0.15))
        assert len(pairs) == 27
        assert pairs == sorted(pairs)
        assert (1.65, 1.65) in [(round(a, 6), round(b, 6)) for a, b in pairs]

    def test_full_grid_count_vs_brute_force(self):
        g = PairGrid()  # step 0.015
        pairs = enumerate_pair_grid(g)
        brute = 0
        for i in range(1000):
            a = i * 0.015
            if not (1.62 - 1e-9 <= a <= 3.0 + 1e-9):
                continue
            for j in range(1000):
                b = j * 0.015
                if 1.62 - 1e-9 <= b <= 2.0 + 1e-9 and a >= b - 1e-9:
                    brute += 1
        assert len(pairs) == brute == 2093

    def test_pairs_respect_ordering_and_ranges(self):
        for a, b in enumerate_pair_grid(PairGrid(step=0.15)):
            assert a >= b - DELTA_FP
            assert 1.62 - DELTA_FP <= a <= 3.0 + DELTA_FP
            assert 1.62 - DELTA_FP <= b <= 2.0 + DELTA_FP

    def test_multiple_index(self):
        g = PairGrid(step=0.015)
        assert g.multiple_index(1.65) == 110
        assert g.multiple_index(110 * 0.015) == 110
        assert g.multiple_index(1.6512) is None
        assert g.multiple_index(1.65 + 5e-10) == 110  # inside float slack

    def test_bad_grid_rejected(self):
        with pytest.raises(ValueError):
            PairGrid(step=0.0)
        with pytest.raises(ValueError):
            PairGrid(r1_min=2.0, r1_max=1.0)


# ---------------------------------------------------------------------------
# certificate validation


def _poke(cert: Certificate, **kw) -> Certificate:
    return dataclasses.replace(cert, **kw)


class TestValidateCertificate:
    @pytest.mark.parametrize("mode", ["lemma15", "grid-b", "grid-c"])
    def test_synthetic_passes(self, mode):
        validate_certificate(synthetic_certificate(mode, 1.65, 1.65))

    def test_round_zero_count_enforced(self):
        cert = synthetic_certificate("grid-b", 1.65, 1.65)
        cert.rounds[0].cubes_in += 1
        with pytest.raises(InconsistentInputs, match="balance"):
            validate_certificate(cert)
        # rebalance but break the enumeration count
        cert.rounds[0].pruned["JohnInfeasible"] += 1
        with pytest.raises(InconsistentInputs, match="initial enumeration"):
            validate_certificate(cert)

    def test_hash_mismatch(self):
        cert = _poke(synthetic_certificate("grid-b", 1.65, 1.65), r1=1.8)
        with pytest.raises(InconsistentInputs, match="hash"):
            validate_certificate(cert)

    def test_forbidden_reason_for_mode(self):
        cert = synthetic_certificate("lemma15", 3.0, 1.62)
        n = cert.rounds[0].pruned["JohnInfeasible"]
        cert.rounds[0].pruned["JohnInfeasible"] = n - 1
        cert.rounds[0].pruned["LargeArc"] = 1
        with pytest.raises(InconsistentInputs, match="foreign"):
            validate_certificate(cert)

    def test_empty_with_survivors(self):
        cert = synthetic_certificate("grid-b", 1.65, 1.65)
        cert.survivors = [(0, 1, 2, 3)]
        cert.survivors_n = cert.rounds[0].n
        with pytest.raises(InconsistentInputs, match="Empty"):
            validate_certificate(cert)

    def test_exhausted_needs_grid_c(self):
        cert = synthetic_certificate("grid-b", 1.65, 1.65)
        cert.rounds[0].pruned["JohnInfeasible"] -= 1
        cert.rounds[0].subdivided = 1
        cert.verdict = "Exhausted"
        cert.survivors = [(0, 0, 0, 0)]
        cert.survivors_n = cert.rounds[0].n
        with pytest.raises(InconsistentInputs, match="Exhausted"):
            validate_certificate(cert)

    def test_malformed_survivors(self):
        cert = synthetic_certificate("grid-c", 1.65, 1.65, n0=12, depth_cap=0)
        cert.rounds[0].pruned["JohnInfeasible"] -= 1
        cert.rounds[0].subdivided = 1
        cert.verdict = "DepthCapReached"
        cert.survivors_n = 12
        for bad in [(3, 2, 1, 0, 0), (0, 1, 2, 3), (0, 0, 0, 0, 99)]:
            cert.survivors = [bad]
            with pytest.raises(InconsistentInputs):
                validate_certificate(cert)

    def test_wrong_resolution_schedule(self):
        cert = synthetic_certificate("grid-b", 1.65, 1.65)
        cert.rounds[0].n *= 3
        with pytest.raises(InconsistentInputs, match="resolution"):
            validate_certificate(cert)

    def test_config_key_drift(self):
        cert = synthetic_certificate("grid-b", 1.65, 1.65)
        cfg = dict(cert.config)
        cfg["extra"] = 1
        with pytest.raises(InconsistentInputs, match="config fields"):
            validate_certificate(_poke(cert, config=cfg))

    def test_subdivision_bounds_between_rounds(self):
        cert = synthetic_certificate("grid-b", 1.65, 1.65, n0=6, depth_cap=1)
        r0 = cert.rounds[0]
        total = r0.cubes_in
        r0.pruned["JohnInfeasible"] = total - 1
        r0.subdivided = 1
        # 40 children of one parent is impossible (max 2^k = 16)
        pruned1 = {k: 0 for k in r0.pruned}
        pruned1["JohnInfeasible"] = 40
        cert.rounds.append(RoundStats(n=12, cubes_in=40, pruned=pruned1,
                                      subdivided=0))
        with pytest.raises(InconsistentInputs, match="subdivision"):
            validate_certificate(cert)

    def test_load_certificate_roundtrip(self, tmp_path):
        cert = synthetic_certificate("grid-b", 1.65, 1.65)
        path = tmp_path / "c.json"
        path.write_text(cert.to_json())
        back = load_certificate(path)
        assert back.to_json() == cert.to_json()

    def test_load_rejects_garbage(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(InconsistentInputs):
            load_certificate(path)
        path.write_text(json.dumps({"schema_version": 1}))
        with pytest.raises(InconsistentInputs):
            load_certificate(path)


# ---------------------------------------------------------------------------
# bound assembly


def _desk_certs(drop: tuple[str, float, float] | None = None):
    grid = PairGrid(step=0.15)
    certs = [synthetic_certificate("lemma15", LEMMA15_R1, LEMMA15_R2)]
    for r1, r2 in enumerate_pair_grid(grid):
        for mode in ("grid-b", "grid-c"):
            if drop == (mode, round(r1, 6), round(r2, 6)):
                continue
            certs.append(synthetic_certificate(mode, r1, r2))
    return grid, certs


class TestAssembleBound:
    def test_complete_set_yields_final_bound(self):
        grid, certs = _desk_certs()
        report = assemble_bound(certs, grid=grid, part_a=True)
        assert report.complete
        assert report.status == "Complete"
        assert report.bound == 1.645
        assert report.required_pairs == 27
        assert report.grid_b_verified == 27
        assert report.grid_c_verified == 27
        assert report.lemma15_ok
        assert report.gaps == []

    def test_missing_pair_is_partial(self):
        grid, certs = _desk_certs(drop=("grid-c", 1.65, 1.65))
        report = assemble_bound(certs, grid=grid, part_a=True)
        assert not report.complete
        assert report.bound is None
        assert report.grid_c_verified == 26
        assert any("grid-c" in g and "1.65" in g for g in report.gaps)

    def test_missing_lemma15_is_partial(self):
        grid, certs = _desk_certs()
        certs = [c for c in certs if c.mode != "lemma15"]
        report = assemble_bound(certs, grid=grid, part_a=True)
        assert not report.complete
        assert any("lemma15" in g for g in report.gaps)

    def test_failed_part_a_is_partial(self):
        grid, certs = _desk_certs()
        report = assemble_bound(certs, grid=grid, part_a=False)
        assert not report.complete
        assert any("three-contact" in g for g in report.gaps)

    def test_non_empty_certificates_do_not_count(self):
        grid, certs = _desk_certs()
        # flip one grid-b certificate to a cap verdict: structurally valid
        # but no longer a verification of its pair
        victim = next(c for c in certs if c.mode == "grid-b")
        victim.rounds[0].pruned["JohnInfeasible"] -= 1
        victim.rounds[0].subdivided = 1
        victim.verdict = "DepthCapReached"
        victim.survivors = [(0, 0, 0, 0)]
        victim.survivors_n = victim.rounds[0].n
        report = assemble_bound(certs, grid=grid, part_a=True)
        assert not report.complete
        assert report.grid_b_verified == 26

    def test_broken_certificate_raises(self):
        grid, certs = _desk_certs()
        certs[3].config_hash = "0" * 64
        with pytest.raises(InconsistentInputs):
            assemble_bound(certs, grid=grid, part_a=True)

    def test_off_grid_certificates_ignored(self):
        grid = PairGrid(step=0.15)
        certs = [synthetic_certificate("grid-b", 1.6512, 1.6512)]
        report = assemble_bound(certs, grid=grid, part_a=True)
        assert report.grid_b_verified == 0

    def test_report_json_shape(self):
        grid, certs = _desk_certs()
        doc = assemble_bound(certs, grid=grid, part_a=True).to_json_dict()
        assert doc["status"] == "Complete"
        assert doc["bound"] == 1.645
        assert doc["grid"]["required_pairs"] == 27
        assert len(doc["inequalities"]) == 3
        assert all(q["holds"] for q in doc["inequalities"])
        json.dumps(doc)  # serializable
