import json

import pytest

from logtangent.arrangement import Arrangement
from logtangent.errors import DegenerateArrangementError
from logtangent.quadrics import embed_dual
from logtangent.report import BaseLocusDim, analyze, base_locus_dim, check_strata

from conftest import arrangement_on_quadric, seeded_arrangement, split_quadric


class TestAnalyze:
    def test_noguchi(self, noguchi):
        rep = analyze(noguchi, samples=200)
        assert rep.big and rep.ample_mod_boundary and rep.almost_ample
        assert rep.base_locus_image_dim == BaseLocusDim("empty")
        assert rep.sampling.hits == 0 and not rep.quadrics and rep.quadric_space_dim == 0

    def test_unique_rank4(self):
        a = seeded_arrangement(3, 9, 0)
        rep = analyze(a, samples=20)
        assert rep.big and not rep.ample_mod_boundary
        assert rep.base_locus_image_dim.to_json() == 2
        assert rep.quadric_space_dim == 1 and rep.quadrics[0].rank == 4
        (w,) = rep.dual_surfaces
        assert w.surface.rank == 4 and embed_dual(w) == rep.quadrics[0]

    def test_unique_rank4_with_rational_rulings(self):
        q = split_quadric(3)
        a = arrangement_on_quadric(q, 9, 0)
        rep = analyze(a, samples=10)
        assert rep.quadrics == [q] and len(rep.lines) == 2
        for lw in rep.lines:
            assert lw.scroll == q

    def test_four_lines(self, four_lines):
        rep = analyze(four_lines, samples=30)
        assert not rep.big and rep.generic_fiber_dim == 1
        assert rep.base_locus_image_dim.to_json() == "full"
        assert rep.upstairs_dim_bound == 3
        assert rep.sampling.hits == 30 and rep.lines

    def test_conic(self, conic_lines):
        rep = analyze(conic_lines, samples=10)
        assert not rep.ample_mod_boundary and rep.quadrics[0].rank == 3
        assert len(rep.lines) == 2 and not rep.lines[0].line.p == rep.lines[1].line.p

    def test_tiny(self):
        a = seeded_arrangement(2, 3, 0)
        rep = analyze(a, samples=5)
        assert rep.big is False and any("not big" in f for f in rep.flags)

    def test_not_general(self):
        a = Arrangement.from_covectors(2, [(1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1)])
        rep = analyze(a)
        assert not rep.general_position and rep.big is None and rep.ample_mod_boundary is None
        assert "not in general position" in rep.to_text()

    def test_interval(self):
        a = arrangement_on_quadric(split_quadric(3), 10, 1)
        rep = analyze(a, samples=5)
        assert rep.conditions_rank == 9
        assert rep.base_locus_image_dim.to_json() == {"interval": [2, 3]}
        assert any("reporting bounds only" in f for f in rep.flags)

    def test_reducible_flag(self):
        rep = analyze(seeded_arrangement(3, 6, 0), samples=5)
        assert any("reducible" in f for f in rep.flags)

    def test_deterministic(self):
        a = seeded_arrangement(3, 8, 2)
        j1 = json.dumps(analyze(a, seed=4, samples=15).to_json())
        j2 = json.dumps(analyze(a, seed=4, samples=15).to_json())
        assert j1 == j2

    def test_text_cites_statements(self, noguchi):
        text = analyze(noguchi, samples=5).to_text()
        for label in ("Theorem A", "Theorem B criterion: rank 6 >= 4n-2", "Theorem C"):
            assert label in text

    def test_json_order(self, noguchi):
        keys = list(analyze(noguchi, samples=5).to_json())
        assert keys[:4] == ["n", "c", "general_position", "big"]


class TestBaseLocus:
    @pytest.mark.parametrize(
        "args,expected",
        [
            ((2, 6, 6, True), "empty"),
            ((3, 8, 8, False), "full"),
            ((3, 9, 9, False), 2),
            ((4, 13, 13, False), 2),
            ((4, 12, 12, False), 3),
            ((3, 9, 8, False), {"interval": [2, 3]}),
            ((2, 6, 5, False), "full"),
        ],
    )
    def test_cases(self, args, expected):
        dim, _ = base_locus_dim(*args)
        assert dim.to_json() == expected


class TestStrata:
    def test_rank10(self):
        a = seeded_arrangement(3, 10, 0)
        res = check_strata(a, 2)
        assert len(res) == 10 + 45 and all(ok for _, ok in res)

    def test_noguchi(self, noguchi):
        res = check_strata(noguchi, 1)
        assert len(res) == 6 and all(ok for _, ok in res)

    def test_failure_is_informational(self):
        a = seeded_arrangement(3, 6, 0)
        rep = analyze(a, samples=0)
        assert not rep.ample_mod_boundary
        failing = [I for I, ok in rep.strata if not ok]
        assert len(failing) == 6 and any(f.startswith("info:") for f in rep.flags)

    def test_depth(self, noguchi):
        with pytest.raises(ValueError):
            check_strata(noguchi, 2)
        assert check_strata(noguchi, 0) == []
        with pytest.raises(DegenerateArrangementError):
            check_strata(Arrangement.from_covectors(2, [(1, 0, 0), (0, 1, 0), (1, 1, 0)]), 1)
