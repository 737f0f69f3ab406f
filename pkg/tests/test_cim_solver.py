"""
Tests for the GFSNN-CIM / SNN-CIM dynamics, trials and batches
"""

import numpy as np
import pytest

from conftest import random_model
from src.cim_solver import (
    BEST,
    FINAL,
    GFSNN,
    SNN,
    GfsnnCimDynamics,
    OscillatorState,
    SnnCimDynamics,
    SolverParams,
    TrialResult,
    grid_points,
    grid_search,
    integrate,
    readout,
    run_batch,
    run_block,
    run_seeded_batch,
    run_trial,
    step,
    write_calibration_csv,
    write_trajectory_csv,
)
from src.errors import BatchError, DivergenceError, InputError
from src.ising_core import IsingModel, brute_force_ground_state, energy

FAST = SolverParams(n_steps=1500)
FERROMAGNET = IsingModel(couplings=[[0.0, 1.0], [1.0, 0.0]])


class TestSolverParams:
    def test_defaults(self):
        params = SolverParams()
        assert (params.a, params.b, params.c, params.zeta) == (0.5, 0.05, 1.0, 0.05)
        assert (params.j_xk, params.j_kx, params.dt, params.n_steps) == (-1.0, 1.0, 0.05, 5000)
        assert (params.readout, params.readout_stride, params.block_size) == (BEST, 10, 64)

    def test_rejects_unknown_readout(self):
        with pytest.raises(InputError):
            SolverParams(readout="median")

    @pytest.mark.parametrize("field", ["readout_stride", "block_size"])
    def test_rejects_nonpositive_counts(self, field):
        with pytest.raises(InputError):
            SolverParams(**{field: 0})

    def test_rejects_nonpositive_dissipation(self):
        with pytest.raises(InputError):
            SolverParams(b=0.0)

    def test_rejects_symmetric_cross_coupling(self):
        with pytest.raises(InputError):
            SolverParams(j_xk=1.0, j_kx=1.0)

    def test_gain_ramp_is_linear(self):
        params = SolverParams(dt=0.1, n_steps=10, gain_ramp=(0.0, 2.0))
        assert params.gain_at(0.0) == 0.0
        assert params.gain_at(0.5) == pytest.approx(1.0)
        assert params.gain_at(5.0) == 2.0

    def test_without_feedback(self):
        assert SolverParams(zeta=0.3).without_feedback().zeta == 0.0

    def test_from_dict_ignores_unknown_keys(self):
        params = SolverParams.from_dict({"zeta": 0.1, "gain_ramp": [0.5, 1.0], "trajectory_stride": 5})
        assert params.zeta == 0.1
        assert params.gain_ramp == (0.5, 1.0)


class TestStep:
    def test_origin_is_fixed_point(self, rng):
        model = random_model(rng, 4)
        state = OscillatorState(x=np.zeros(4), k=np.zeros(4))
        new = step(state, model, SolverParams())
        np.testing.assert_array_equal(new.x, np.zeros(4))
        np.testing.assert_array_equal(new.k, np.zeros(4))
        assert new.t == pytest.approx(0.05)
        assert new.step_index == 1

    def test_single_uncoupled_oscillator(self):
        model = IsingModel(couplings=np.zeros((1, 1)))
        params = SolverParams(a=1.0, b=0.2, c=1.0, zeta=0.0, j_xk=-1.0, j_kx=1.0, dt=0.01)
        new = step(OscillatorState(x=np.array([0.1]), k=np.zeros(1)), model, params)
        assert new.x[0] == pytest.approx(0.10099, abs=1e-15)
        assert new.k[0] == pytest.approx(0.001, abs=1e-15)

    def test_mean_field_term_is_uniform(self):
        model = IsingModel(couplings=np.zeros((4, 4)))
        params = SolverParams(zeta=0.3)
        x, k = np.full(4, 0.2), np.zeros(4)
        dx_gf, _ = GfsnnCimDynamics(model, params).derivatives(x, k, 0.0)
        dx_snn, _ = SnnCimDynamics(model, params).derivatives(x, k, 0.0)
        np.testing.assert_allclose(dx_gf - dx_snn, np.full(4, 2 * 0.3 * 0.2), atol=1e-15)

    def test_input_state_untouched(self, rng):
        model = random_model(rng, 3)
        state = OscillatorState(x=np.array([0.1, -0.2, 0.3]), k=np.zeros(3))
        step(state, model, SolverParams())
        np.testing.assert_array_equal(state.x, [0.1, -0.2, 0.3])

    def test_shape_mismatch(self, rng):
        with pytest.raises(InputError):
            step(OscillatorState(x=np.zeros(2), k=np.zeros(2)), random_model(rng, 3), SolverParams())


class TestRunTrial:
    def test_readout_sign_of_zero(self):
        np.testing.assert_array_equal(readout(np.array([0.0, -0.5, 0.5])), [1, -1, 1])

    def test_deterministic(self, rng):
        model = random_model(rng, 6)
        first = run_trial(model, FAST, seed=3, trajectory_stride=100)
        second = run_trial(model, FAST, seed=3, trajectory_stride=100)
        np.testing.assert_array_equal(first.spins, second.spins)
        assert first.energy == second.energy
        for a, b in zip(first.trajectory.x, second.trajectory.x):
            np.testing.assert_array_equal(a, b)

    def test_energy_matches_spins(self, rng):
        model = random_model(rng, 8)
        result = run_trial(model, FAST, seed=0)
        assert result.energy == pytest.approx(energy(model, result.spins), abs=1e-12)

    def test_ferromagnet_aligns(self):
        aligned = sum(int(r.spins[0] == r.spins[1])
                      for r in (run_trial(FERROMAGNET, FAST, seed) for seed in range(50)))
        assert aligned >= 48

    def test_zero_feedback_reproduces_snn(self, rng):
        params = SolverParams(n_steps=300, zeta=0.0)
        for seed in range(20):
            model = random_model(rng, 5)
            gf = run_trial(model, params, seed=seed, variant=GFSNN, trajectory_stride=1)
            snn = run_trial(model, params, seed=seed, variant=SNN, trajectory_stride=1)
            for x_gf, x_snn, k_gf, k_snn in zip(gf.trajectory.x, snn.trajectory.x,
                                                gf.trajectory.k, snn.trajectory.k):
                np.testing.assert_array_equal(x_gf, x_snn)
                np.testing.assert_array_equal(k_gf, k_snn)

    def test_best_readout_never_worse_than_final(self, rng):
        for seed in range(5):
            model = random_model(rng, 8)
            best = run_trial(model, SolverParams(n_steps=600, readout=BEST), seed=seed)
            final = run_trial(model, SolverParams(n_steps=600, readout=FINAL), seed=seed)
            assert best.energy <= final.energy + 1e-9

    def test_permutation_symmetry(self, rng):
        model = random_model(rng, 5)
        perm = rng.permutation(5)
        permuted = IsingModel(couplings=model.couplings[np.ix_(perm, perm)])
        params = SolverParams(n_steps=400)
        x0 = rng.uniform(-0.01, 0.01, 5)

        _, trajectory = integrate(OscillatorState(x=x0, k=np.zeros(5)), model, params, trajectory_stride=50)
        _, permuted_trajectory = integrate(OscillatorState(x=x0[perm], k=np.zeros(5)), permuted, params,
                                           trajectory_stride=50)
        for x, x_perm in zip(trajectory.x, permuted_trajectory.x):
            np.testing.assert_allclose(x[perm], x_perm, atol=1e-10)

    def test_bounded_amplitudes(self, rng):
        params = SolverParams(n_steps=1000)
        for _ in range(3):
            couplings = np.triu(rng.uniform(-1, 1, size=(50, 50)), 1)
            model = IsingModel(couplings=couplings + couplings.T)
            result = run_trial(model, params, seed=0, trajectory_stride=10)
            assert max(np.max(np.abs(x)) for x in result.trajectory.x) < 10.0

    def test_divergence_carries_seed(self):
        model = IsingModel(couplings=np.zeros((1, 1)))
        with np.errstate(over="ignore", invalid="ignore"):
            with pytest.raises(DivergenceError) as error:
                run_trial(model, SolverParams(dt=10.0, n_steps=50), seed=4)
        assert error.value.seed == 4

    @pytest.mark.slow
    def test_ferromagnet_aligns_at_defaults(self):
        results = run_batch(FERROMAGNET, SolverParams(), n_trials=200, base_seed=0)
        aligned = sum(int(r.spins[0] == r.spins[1]) for r in results.trials)
        assert results.n_diverged == 0
        assert aligned >= 190

    @pytest.mark.slow
    def test_bounded_amplitudes_at_defaults(self, rng):
        for index in range(100):
            couplings = np.triu(rng.uniform(-1, 1, size=(50, 50)), 1)
            model = IsingModel(couplings=couplings + couplings.T)
            result = run_trial(model, SolverParams(), seed=index, trajectory_stride=1)
            assert max(np.max(np.abs(x)) for x in result.trajectory.x) < 10.0

    def test_trajectory_csv(self, rng, tmp_path):
        result = run_trial(random_model(rng, 3), SolverParams(n_steps=20), seed=0, trajectory_stride=10)
        path = write_trajectory_csv(result.trajectory, tmp_path / "trajectory.csv")
        lines = path.read_text().splitlines()
        assert lines[0] == "t,x_0,x_1,x_2"
        assert len(lines) == 1 + 3


class TestBatch:
    def test_single_trial_equals_run_trial(self, rng):
        model = random_model(rng, 6)
        batch = run_batch(model, FAST, n_trials=1, base_seed=5)
        single = run_trial(model, FAST, seed=5)
        np.testing.assert_array_equal(batch.best.spins, single.spins)
        assert batch.best.energy == single.energy

    def test_block_rows_match_single_trials(self, rng):
        model = random_model(rng, 6)
        block = run_block(model, FAST, [2, 3, 4, 5])
        for result in block:
            single = run_trial(model, FAST, seed=result.seed)
            np.testing.assert_array_equal(result.spins, single.spins)
            assert result.energy == single.energy

    def test_block_size_does_not_change_results(self, rng):
        model = random_model(rng, 6)
        one = run_batch(model, SolverParams(n_steps=1500, block_size=1), 7, 0)
        three = run_batch(model, SolverParams(n_steps=1500, block_size=3), 7, 0)
        np.testing.assert_array_equal(one.energies, three.energies)
        assert one.best.seed == three.best.seed

    def test_diverging_batch_raises(self):
        model = IsingModel(couplings=np.zeros((2, 2)))
        with pytest.raises(BatchError):
            run_batch(model, SolverParams(dt=10.0, n_steps=50), n_trials=3, base_seed=0)

    def test_success_rate_against_oracle(self, rng):
        model = random_model(rng, 10)
        _, ground = brute_force_ground_state(model)
        batch = run_batch(model, FAST, n_trials=8, base_seed=0, reference_energy=ground)
        assert 0.0 <= batch.success_rate <= 1.0
        assert batch.best.energy >= ground - 1e-9

    def test_zero_feedback_matches_snn_batch(self, rng):
        model = random_model(rng, 6)
        params = SolverParams(n_steps=800, zeta=0.0)
        gf = run_batch(model, params, 6, 0, variant=GFSNN)
        snn = run_batch(model, params, 6, 0, variant=SNN)
        np.testing.assert_array_equal(gf.energies, snn.energies)

    def test_worker_count_does_not_change_results(self, rng):
        model = random_model(rng, 6)
        serial = run_batch(model, FAST, 6, 0, max_workers=1)
        threaded = run_batch(model, FAST, 6, 0, max_workers=3)
        np.testing.assert_array_equal(serial.energies, threaded.energies)
        np.testing.assert_array_equal(serial.seeds, threaded.seeds)
        assert serial.best.seed == threaded.best.seed

    def test_ties_go_to_lowest_seed(self):
        spins = np.array([1], dtype=np.int8)
        batch = run_seeded_batch(lambda seed: TrialResult(spins=spins, energy=float(seed % 2), seed=seed),
                                 n_trials=4, base_seed=3)
        assert batch.best.seed == 4

    def test_diverged_trials_are_excluded_from_rates(self):
        spins = np.array([1], dtype=np.int8)

        def trial(seed):
            if seed == 1:
                raise DivergenceError(step=10)
            return TrialResult(spins=spins, energy=0.0, seed=seed)

        batch = run_seeded_batch(trial, n_trials=4, base_seed=0, reference_energy=0.0)
        assert batch.diverged_seeds == [1]
        assert batch.n_trials == 4
        assert batch.n_completed == 3
        assert batch.success_rate == pytest.approx(1.0)

    def test_all_diverged(self):
        def trial(seed):
            raise DivergenceError(step=1)

        with pytest.raises(BatchError):
            run_seeded_batch(trial, n_trials=3, base_seed=0)

    def test_rejects_empty_batch(self, rng):
        with pytest.raises(InputError):
            run_batch(random_model(rng, 3), FAST, n_trials=0, base_seed=0)


class TestCalibration:
    def test_grid_points_vary_last_axis_fastest(self):
        points = grid_points({"a": [0.25, 0.5], "zeta": [0.0, 0.05]})
        assert points == [{"a": 0.25, "zeta": 0.0}, {"a": 0.25, "zeta": 0.05},
                          {"a": 0.5, "zeta": 0.0}, {"a": 0.5, "zeta": 0.05}]

    def test_grid_rejects_fixed_and_unknown_fields(self):
        for grid in ({"readout": ["best"]}, {"gain": [1.0]}, {"a": []}):
            with pytest.raises(InputError):
                grid_points(grid)

    def test_points_ranked_by_mean_rate(self):
        def evaluate(params):
            return {"x": 1.0 - abs(params.a - 0.5), "y": 1.0 if params.c == 1.0 else 0.0}

        points = grid_search({"a": [0.25, 0.5, 0.75], "c": [0.5, 1.0]}, SolverParams(),
                             {"fake": evaluate})
        assert points[0].values == {"a": 0.5, "c": 1.0}
        assert points[0].score == pytest.approx(1.0)
        assert set(points[0].metrics) == {"fake.x", "fake.y"}
        # ties keep grid order
        assert [p.values["a"] for p in points[1:3]] == [0.25, 0.75]

    def test_grid_point_values_reach_solver_params(self):
        seen = []
        grid_search({"n_steps": [100, 200]}, SolverParams(),
                    {"steps": lambda params: seen.append(params.n_steps) or {"ok": 1.0}})
        assert seen == [100, 200]

    def test_calibration_csv(self, tmp_path):
        points = grid_search({"zeta": [0.0, 0.1]}, SolverParams(),
                             {"m": lambda params: {"rate": params.zeta}})
        lines = write_calibration_csv(points, tmp_path / "calibration.csv").read_text().splitlines()
        assert lines[0] == "zeta,m.rate,score"
        assert lines[1] == "0.1,0.1,0.1"
        assert len(lines) == 3
