import numpy as np
import pytest

from annealswarm import ConfigError, ExperimentGrid, SaConfig, rpe, run_grid, summarize_fig2
from annealswarm.bench import CellStats, expand_cells, replication_seeds

FAST_SA = SaConfig(outer_iterations=20, t_hot=15.0)


def _grid(mknap1_path, **kw):
    base = dict(
        path=str(mknap1_path),
        problems=(6,),
        coordinators=("esa",),
        swarm_sizes=(3,),
        inner_iterations=(1,),
        replications=2,
        generations=3,
        sa=FAST_SA,
    )
    base.update(kw)
    return ExperimentGrid(**base)


@pytest.fixture(scope="module")
def mknap1_path():
    from annealswarm import bundled_mknap1_path

    return bundled_mknap1_path()


class TestRpe:
    def test_perfect_score(self):
        assert rpe(100.0, 100.0) == 0.0

    def test_direct_arithmetic(self):
        assert rpe(100.0, 99.0) == pytest.approx(0.01)

    def test_reproduces_reported_fraction(self):
        f_opt = 10618.0
        assert rpe(f_opt, f_opt * (1 - 0.00061)) == pytest.approx(0.00061, abs=1e-12)

    def test_rejects_non_positive_optimum(self):
        with pytest.raises(ValueError):
            rpe(0.0, 1.0)


class TestGridShape:
    def test_table_one_shaped_grid_has_42_cells(self, mknap1_path):
        grid = _grid(
            mknap1_path,
            problems=(6, 7),
            coordinators=("esa", "bco", "pso"),
            swarm_sizes=(5, 10, 15, 20, 30, 40, 50),
            inner_iterations=(1,),
        )
        assert len(expand_cells(grid)) == 2 * 3 * 7 * 1

    def test_replication_seeds_disjoint_across_cells(self, mknap1_path):
        grid = _grid(mknap1_path, coordinators=("esa", "bco"), swarm_sizes=(3, 5),
                     replications=7)
        cells = expand_cells(grid)
        all_seeds = [s for ci in range(len(cells)) for s in replication_seeds(grid, ci)]
        assert len(all_seeds) == len(set(all_seeds)) == len(cells) * 7

    def test_empty_dimension_rejected(self, mknap1_path):
        with pytest.raises(ConfigError):
            _grid(mknap1_path, coordinators=())

    def test_unknown_coordinator_rejected(self, mknap1_path):
        with pytest.raises(ConfigError):
            _grid(mknap1_path, coordinators=("abc",))

    def test_out_of_range_problem_rejected(self, mknap1_path):
        with pytest.raises(ConfigError, match="out of range"):
            expand_cells(_grid(mknap1_path, problems=(12,)))

    def test_unknown_optimum_names_instance(self, tmp_path):
        nameless = tmp_path / "noopt.txt"
        nameless.write_text("1  2 1 0  3 4  1 1  1\n")
        with pytest.raises(ConfigError, match="noopt-1"):
            expand_cells(_grid(nameless, problems=(1,)))

    def test_optimum_override_fills_gap(self, tmp_path):
        nameless = tmp_path / "noopt.txt"
        nameless.write_text("1  2 1 0  3 4  1 1  1\n")
        cells = expand_cells(_grid(nameless, problems=(1,), optima={1: 4.0}))
        assert cells[0][1] == 4.0


class TestRunGrid:
    def test_degenerate_single_cell(self, mknap1_path):
        cells = run_grid(_grid(mknap1_path, replications=1))
        assert len(cells) == 1
        c = cells[0]
        assert c.replications == 1
        assert c.rpe == rpe(c.f_opt, c.f_avrg)
        assert c.best_found <= c.f_opt

    def test_identical_grids_are_deterministic(self, mknap1_path):
        a = run_grid(_grid(mknap1_path, coordinators=("esa", "pso")))
        b = run_grid(_grid(mknap1_path, coordinators=("esa", "pso")))
        for ca, cb in zip(a, b):
            assert ca.f_avrg == cb.f_avrg
            assert ca.best_found == cb.best_found
            assert ca.rpe == cb.rpe

    def test_parallel_matches_serial(self, mknap1_path):
        grid = _grid(mknap1_path, replications=3)
        serial = run_grid(grid, parallel_replications=1)
        parallel = run_grid(grid, parallel_replications=2)
        for cs, cp in zip(serial, parallel):
            assert cs.f_avrg == cp.f_avrg and cs.best_found == cp.best_found

    def test_zero_rpe_when_every_replication_hits(self, tmp_path):
        trivial = tmp_path / "easy.txt"
        trivial.write_text("1  2 1 7  3 4  1 1  9\n")
        cells = run_grid(_grid(trivial, problems=(1,), replications=3,
                               sa=SaConfig(outer_iterations=30, t_hot=1.0)))
        assert cells[0].rpe == 0.0


class TestSummarizeFig2:
    def _cell(self, **kw):
        base = dict(benchmark="b", coordinator="esa", swarm_size=5, inner_iters=1,
                    replications=2, rpe=0.002, cpu_mean_s=0.1, f_avrg=1.0, f_opt=1.0,
                    best_found=1.0)
        base.update(kw)
        return CellStats(**base)

    def test_single_cell_group(self):
        rows = summarize_fig2([self._cell()])
        assert rows == [("b", 1, "esa", 0.002)]

    def test_mean_across_swarm_sizes(self):
        rows = summarize_fig2(
            [self._cell(swarm_size=5, rpe=0.002), self._cell(swarm_size=10, rpe=0.004)]
        )
        assert rows[0][3] == pytest.approx(0.003)

    def test_groups_keyed_by_benchmark_inner_coordinator(self):
        rows = summarize_fig2(
            [self._cell(), self._cell(inner_iters=5), self._cell(coordinator="pso")]
        )
        assert len(rows) == 3

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError):
            summarize_fig2([])
