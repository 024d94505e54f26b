import numpy as np
import pytest

from phasereg import angmom, boundstates, potentials, quantumstate


@pytest.fixture(scope="module")
def levels_e():
    curve_e, _ = potentials.load_model_li2()
    grid = potentials.GridSpec()
    return {n: boundstates.solve_bound(curve_e, n, 3, grid) for n in (1, 3)}


class TestEnergyBins:
    def test_defaults(self):
        b = quantumstate.EnergyBins()
        assert b.centers_cm[0] == 10.0
        assert b.centers_cm[-1] == 190.0
        assert len(b.centers_cm) == 150
        spacing = np.diff(b.centers)
        assert np.allclose(spacing, b.d_eps)


class TestPhaseRegister:
    def test_bit_to_phase_convention(self):
        reg = quantumstate.encode(0b101, 3)
        # bit set -> in phase (0), bit clear -> out of phase (pi)
        assert reg.delta_phi(0) == 0.0
        assert reg.delta_phi(1) == np.pi
        assert reg.delta_phi(2) == 0.0

    def test_zero_is_all_pi(self):
        reg = quantumstate.encode(0, 2)
        assert reg.phases == (np.pi, np.pi)

    def test_phases_msb_first(self):
        reg = quantumstate.encode(0b10, 2)
        assert reg.phases == (0.0, np.pi)

    def test_range_check(self):
        with pytest.raises(ValueError, match="out of range"):
            quantumstate.encode(4, 2)
        with pytest.raises(ValueError, match="out of range"):
            quantumstate.encode(-1, 2)


class TestChannelLabel:
    def test_validation(self):
        quantumstate.ChannelLabel("bound", 1, 1)
        with pytest.raises(ValueError, match="kind"):
            quantumstate.ChannelLabel("weird", 1, 0)
        with pytest.raises(ValueError, match="exceeds N_E"):
            quantumstate.ChannelLabel("bound", 1, 2)
        with pytest.raises(ValueError, match="exceeds l"):
            quantumstate.ChannelLabel("ion", 1, 0, l=1, ml=2, bin_index=0)
        with pytest.raises(ValueError, match="exceeds N"):
            quantumstate.ChannelLabel("ion", 1, 3, l=1, ml=1, bin_index=0)


class TestAssembleInitial:
    def test_norm_independent_of_register(self, levels_e):
        norms = []
        for n in range(4):
            reg = quantumstate.encode(n, 2)
            st = quantumstate.assemble_initial(reg, levels_e, 2, 1, 0)
            norms.append(st.norm())
        assert np.ptp(norms) < 1e-12 * norms[0]

    def test_component_weights(self, levels_e):
        reg = quantumstate.encode(0, 1)
        st = quantumstate.assemble_initial(reg, levels_e, 2, 1, 0)
        g = st.grid
        pops = np.sum(np.abs(st.bound) ** 2, axis=1) * g.dr
        expect = [
            angmom.prep_coefficient(1, 2, 1, 0) ** 2,
            angmom.prep_coefficient(1, 2, 3, 0) ** 2,
        ]
        assert pops[0] / pops[1] == pytest.approx(expect[0] / expect[1], rel=1e-10)

    def test_phase_applied_to_upper_component(self, levels_e):
        in_phase = quantumstate.assemble_initial(
            quantumstate.encode(1, 1), levels_e, 2, 1, 0
        )
        out_phase = quantumstate.assemble_initial(
            quantumstate.encode(0, 1), levels_e, 2, 1, 0
        )
        assert np.allclose(in_phase.bound[0], out_phase.bound[0])
        assert np.allclose(in_phase.bound[1], -out_phase.bound[1])

    def test_large_m_drops_lower_component(self, levels_e):
        reg = quantumstate.encode(0, 1)
        st = quantumstate.assemble_initial(reg, levels_e, 2, 1, 2)
        assert st.bound_n_list == [3]

    def test_no_channel_for_excessive_m(self, levels_e):
        with pytest.raises(ValueError, match="projection"):
            quantumstate.assemble_initial(
                quantumstate.encode(0, 1), levels_e, 2, 1, 5
            )

    def test_missing_vibrational_level(self, levels_e):
        with pytest.raises(ValueError, match="missing level"):
            quantumstate.assemble_initial(
                quantumstate.encode(0, 4), levels_e, 2, 1, 0
            )

    def test_ion_channels_start_empty(self, levels_e):
        st = quantumstate.assemble_initial(
            quantumstate.encode(0, 1), levels_e, 2, 1, 0
        )
        assert st.ion_norm() == 0.0
        assert st.ion_ang_list == angmom.ion_channels([1, 3], 0)


class TestWavepacketState:
    def test_label_round_trip(self, levels_e):
        st = quantumstate.assemble_initial(
            quantumstate.encode(1, 1), levels_e, 2, 1, 0
        )
        lab = quantumstate.ChannelLabel("bound", 3, 0)
        assert np.array_equal(st[lab], st.bound[1])
        ion_lab = quantumstate.ChannelLabel("ion", 3, 0, l=1, ml=1, bin_index=7)
        k = st.ion_ang_list.index((3, 1))
        assert np.array_equal(st[ion_lab], st.ion[k, 7])

    def test_snapshot_round_trip(self, tmp_path, levels_e):
        st = quantumstate.assemble_initial(
            quantumstate.encode(2, 2), levels_e, 2, 1, 1
        )
        st.ion[2, 5] = 0.1j
        st.t = 33.5
        path = tmp_path / "state.npz"
        st.save(path)
        back = quantumstate.WavepacketState.load(path)
        assert back.grid == st.grid
        assert back.bins == st.bins
        assert back.bound_n_list == st.bound_n_list
        assert back.ion_ang_list == st.ion_ang_list
        assert back.m_total == st.m_total
        assert back.t == st.t
        assert np.array_equal(back.bound, st.bound)
        assert np.array_equal(back.ion, st.ion)

    def test_copy_is_deep(self, levels_e):
        st = quantumstate.assemble_initial(
            quantumstate.encode(0, 1), levels_e, 2, 1, 0
        )
        other = st.copy()
        other.bound[0, 0] = 99.0
        assert st.bound[0, 0] != 99.0
