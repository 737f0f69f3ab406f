"""
Tests for Ising/QUBO representations, energies, the oracle and the dump format
"""

import itertools

import numpy as np
import pytest

from conftest import random_model
from src.errors import InputError, ParseError, SizeError
from src.ising_core import (
    IsingModel,
    QuboQuadratic,
    bits_to_spins,
    brute_force_ground_state,
    canonical_gauge,
    energies,
    energy,
    format_ising_dump,
    parse_ising_dump,
    qubo_to_ising,
    spins_to_bits,
)


def all_configs(n):
    return np.array(list(itertools.product((1, -1), repeat=n)), dtype=np.int8)


class TestIsingModel:
    def test_rejects_asymmetric_couplings(self):
        with pytest.raises(InputError):
            IsingModel(couplings=[[0.0, 1.0], [0.0, 0.0]])

    def test_rejects_nonzero_diagonal(self):
        with pytest.raises(InputError):
            IsingModel(couplings=[[1.0, 0.0], [0.0, 0.0]])

    def test_rejects_aux_index_out_of_range(self):
        with pytest.raises(InputError):
            IsingModel(couplings=np.zeros((2, 2)), aux_index=2)

    def test_couplings_are_read_only(self):
        model = IsingModel(couplings=np.zeros((2, 2)))
        with pytest.raises(ValueError):
            model.couplings[0, 1] = 1.0


class TestEnergy:
    def test_zero_couplings(self):
        assert energy(IsingModel(couplings=np.zeros((2, 2))), [1, 1]) == 0.0

    def test_single_coupling(self):
        model = IsingModel(couplings=[[0.0, 1.0], [1.0, 0.0]])
        assert energy(model, [1, 1]) == -1.0
        assert energy(model, [1, -1]) == 1.0

    def test_matches_term_by_term_sum(self, rng):
        model = random_model(rng, 8)
        for spins in all_configs(8):
            expected = model.offset
            for i in range(8):
                for j in range(i + 1, 8):
                    expected -= model.couplings[i, j] * spins[i] * spins[j]
            assert energy(model, spins) == pytest.approx(expected, abs=1e-12)

    def test_vectorized_energies_agree(self, rng):
        model = random_model(rng, 6)
        rows = all_configs(6)
        expected = np.array([energy(model, s) for s in rows])
        np.testing.assert_allclose(energies(model, rows), expected, atol=1e-12)

    def test_global_flip_invariance(self, rng):
        model = random_model(rng, 7)
        for spins in all_configs(7):
            assert energy(model, spins) == pytest.approx(energy(model, -spins), abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            energy(IsingModel(couplings=np.zeros((3, 3))), [1, 1])

    def test_rejects_non_spin_values(self):
        with pytest.raises(InputError):
            energy(IsingModel(couplings=np.zeros((2, 2))), [1, 0])


class TestQuboToIsing:
    def test_constant_only(self):
        model = qubo_to_ising(QuboQuadratic(quad=np.zeros((2, 2)), linear=np.zeros(2), constant=5.0))
        for bits in itertools.product((0, 1), repeat=2):
            assert energy(model, bits_to_spins(bits, with_aux=True)) == pytest.approx(5.0)

    def test_single_linear_variable(self):
        model = qubo_to_ising(QuboQuadratic(quad=np.zeros((1, 1)), linear=[2.0]))
        assert model.n_spins == 2
        assert model.aux_index == 1
        assert energy(model, bits_to_spins([1], with_aux=True)) == pytest.approx(2.0)
        assert energy(model, bits_to_spins([0], with_aux=True)) == pytest.approx(0.0)

    def test_exhaustive_agreement_on_ten_variables(self, rng):
        quad = rng.normal(size=(10, 10))
        quad = 0.5 * (quad + quad.T)
        qubo = QuboQuadratic(quad=quad, linear=rng.normal(size=10), constant=float(rng.normal()))
        model = qubo_to_ising(qubo)
        assert model.n_spins == 11

        worst = 0.0
        for bits in itertools.product((0, 1), repeat=10):
            bits = np.array(bits)
            diff = abs(energy(model, bits_to_spins(bits, with_aux=True)) - qubo.evaluate(bits))
            worst = max(worst, diff)
        assert worst < 1e-9

    def test_bit_spin_conversion(self):
        spins = bits_to_spins([0, 1, 1])
        np.testing.assert_array_equal(spins, [-1, 1, 1])
        np.testing.assert_array_equal(spins_to_bits(spins), [0, 1, 1])

    def test_rejects_mismatched_linear_term(self):
        with pytest.raises(InputError):
            QuboQuadratic(quad=np.zeros((2, 2)), linear=np.zeros(3))


class TestBruteForce:
    def test_single_free_spin(self):
        spins, ground = brute_force_ground_state(IsingModel(couplings=np.zeros((1, 1))))
        assert ground == 0.0
        np.testing.assert_array_equal(spins, [1])

    def test_ferromagnetic_pair(self):
        spins, ground = brute_force_ground_state(IsingModel(couplings=[[0.0, 1.0], [1.0, 0.0]]))
        assert ground == -1.0
        np.testing.assert_array_equal(spins, [1, 1])

    def test_matches_independent_scan(self, rng):
        model = random_model(rng, 12)
        _, ground = brute_force_ground_state(model)
        scan = min(energy(model, s) for s in all_configs(12))
        assert ground == pytest.approx(scan, abs=1e-12)

    def test_never_worse_than_random_configurations(self, rng):
        model = random_model(rng, 14)
        _, ground = brute_force_ground_state(model)
        samples = rng.choice(np.array([-1, 1], dtype=np.int8), size=(1000, 14))
        assert np.all(energies(model, samples) >= ground - 1e-12)

    def test_aux_spin_is_pinned(self, rng):
        model = random_model(rng, 6, aux=True)
        spins, ground = brute_force_ground_state(model)
        assert spins[model.aux_index] == 1
        assert energy(model, spins) == pytest.approx(ground)

    def test_size_cap(self):
        with pytest.raises(SizeError):
            brute_force_ground_state(IsingModel(couplings=np.zeros((5, 5))), max_spins=4)


class TestCanonicalGauge:
    def test_unchanged_when_aux_positive(self):
        np.testing.assert_array_equal(canonical_gauge(np.array([1, 1, 1]), 2), [1, 1, 1])

    def test_flips_when_aux_negative(self):
        np.testing.assert_array_equal(canonical_gauge(np.array([-1, 1, -1]), 2), [1, -1, 1])

    def test_energy_preserved(self, rng):
        for _ in range(100):
            model = random_model(rng, 5, aux=True)
            spins = rng.choice(np.array([-1, 1], dtype=np.int8), size=5)
            gauged = canonical_gauge(spins, model.aux_index)
            assert energy(model, gauged) == pytest.approx(energy(model, spins), abs=1e-12)


class TestIsingDump:
    def test_dump_restores_model(self, rng):
        model = random_model(rng, 5, aux=True)
        restored = parse_ising_dump(format_ising_dump(model))
        assert restored.n_spins == 5
        assert restored.aux_index == 4
        assert restored.offset == model.offset
        np.testing.assert_array_equal(restored.couplings, model.couplings)

    def test_infers_spin_count_from_couplings(self):
        model = parse_ising_dump("0 3 1.5\n")
        assert model.n_spins == 4
        assert model.couplings[3, 0] == 1.5

    def test_bad_line_reports_line_number(self):
        with pytest.raises(ParseError) as error:
            parse_ising_dump("SPINS 3\n0 1 x\n", source="model.ising")
        assert error.value.line_number == 2
        assert "model.ising" in str(error.value)

    def test_rejects_self_coupling(self):
        with pytest.raises(ParseError):
            parse_ising_dump("SPINS 2\n1 1 1.0\n")
