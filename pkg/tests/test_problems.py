"""Tests for the benchmark problem builders and their analytical references."""

import numpy as np
import pytest
from scipy.sparse.linalg import spsolve

from padestep.errors import ParameterError
from padestep.models import Grading, HistoryRecord, ProblemKind
from padestep.problems import ProblemSpec, build_model, cfl_to_dt, recommended_cfl
from padestep.problems.base import merge_params
from padestep.problems.rod import (
    assemble_bar,
    axial_stress,
    bimaterial_reference_velocity,
    build_bimaterial_rod,
    build_rod,
    rod_nodes,
    rod_reference_velocity,
)
from padestep.problems.scalar_wave import build_scalar_wave, mu_mn, scalar_wave_reference
from padestep.problems.sdof import build_sdof, richardson_levels, sdof_error, sdof_reference
from padestep.problems.three_dof import (
    build_three_dof,
    reaction_force,
    reaction_history,
    three_dof_modal,
    three_dof_reference,
)

ROD_SPEED = np.sqrt(3.0e7 / 0.00073)


def test_merge_params_overrides():
    assert merge_params({"a": 1.0, "b": 2.0}, {"b": 5}) == {"a": 1.0, "b": 5.0}
    assert merge_params({"a": 1.0}, None) == {"a": 1.0}


def test_merge_params_rejects_unknown_and_non_positive():
    with pytest.raises(ParameterError, match="unknown parameter"):
        merge_params({"a": 1.0}, {"c": 1.0})
    with pytest.raises(ParameterError, match="must be positive"):
        merge_params({"a": 1.0}, {"a": 0.0})


def test_cfl_to_dt():
    assert cfl_to_dt(10.0, 2.0, 0.5) == pytest.approx(2.5)
    with pytest.raises(ParameterError):
        cfl_to_dt(0.0, 1.0, 1.0)


@pytest.mark.parametrize("order,expected", [(1, 10.0), (2, 10.0), (3, 20.0), (4, 30.0)])
def test_recommended_cfl(order, expected):
    assert recommended_cfl(order) == expected


def test_rod_nodes_uniform():
    np.testing.assert_allclose(rod_nodes(4, 2.0, Grading.UNIFORM), [0.0, 0.5, 1.0, 1.5, 2.0])


def test_rod_nodes_sinusoidal_grading():
    length = 3.0
    nodes = rod_nodes(2000, length, Grading.SINUSOIDAL)
    sizes = np.diff(nodes)
    assert nodes[0] == 0.0
    assert nodes[-1] == pytest.approx(length)
    assert np.all(sizes > 0)
    assert sizes.max() == pytest.approx(9.088e-4 * length, rel=1e-3)
    assert sizes.min() == pytest.approx(9.12e-5 * length, rel=1e-2)


def test_assemble_bar_mass_and_rigid_mode():
    nodes = np.array([0.0, 1.0, 3.0])
    k, m = assemble_bar(nodes, np.array([2.0, 4.0]), np.array([1.0, 3.0]), 0.5)
    assert m.sum() == pytest.approx(0.5 * (1.0 * 1.0 + 3.0 * 2.0))
    np.testing.assert_allclose(k @ np.ones(3), 0.0, atol=1e-12)
    np.testing.assert_allclose(k.toarray(), [[1.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 1.0]])


def test_build_rod_defaults():
    model = build_rod(200)
    assert model.system.n_dof == 200
    assert model.probes == {"mid": 99, "tip": 199}
    assert model.coordinates[99] == pytest.approx(100.0)
    assert model.wave_speed == pytest.approx(ROD_SPEED)
    assert model.cfl_length == pytest.approx(1.0)
    np.testing.assert_allclose(model.system.load(0.0)[-1], 1.0e4)


def test_build_rod_graded_cfl_length_is_largest_element():
    model = build_rod(100, Grading.SINUSOIDAL)
    nodes = np.concatenate([[0.0], model.coordinates])
    assert model.cfl_length == pytest.approx(np.diff(nodes).max())


def test_build_rod_rejects_tiny_mesh():
    with pytest.raises(ParameterError):
        build_rod(1)


def test_rod_reference_plateaus():
    z = 0.00073 * ROD_SPEED
    plateau = 1.0e4 / z
    t = np.array([50.0, 200.0, 350.0, 550.0]) / ROD_SPEED
    v = rod_reference_velocity(100.0, t)
    np.testing.assert_allclose(v, [0.0, plateau, 0.0, -plateau], atol=1e-9 * plateau)


def test_rod_reference_rejects_outside_point():
    with pytest.raises(ParameterError):
        rod_reference_velocity(250.0, [0.0])


def test_rod_model_reference_columns():
    model = build_rod(50)
    ref = model.reference(np.array([0.0, 1e-4]))
    assert set(ref) == {"mid_v_ref", "tip_v_ref"}


def test_axial_stress_uniform_strain():
    model = build_rod(10, params={"length": 10.0, "modulus": 2.0})
    u = 0.01 * model.coordinates
    np.testing.assert_allclose(axial_stress(model, u), 0.02)


def test_bimaterial_interface_plateau():
    z_left = np.sqrt(8000.0)
    z_right = np.sqrt(800.0)
    v = bimaterial_reference_velocity(2.0, [0.05, 0.09])
    assert v[0] == 0.0
    assert v[1] == pytest.approx(2.0 / (z_left + z_right))


def test_build_bimaterial_rod():
    model = build_bimaterial_rod(20)
    assert model.system.n_dof == 40
    assert model.coordinates[model.probes["mid"]] == pytest.approx(2.0)
    assert model.wave_speed == pytest.approx(np.sqrt(800.0))
    assert model.cfl_length == pytest.approx(0.1)
    stress = axial_stress(model, 0.001 * model.coordinates)
    np.testing.assert_allclose(stress[:20], 8.0)
    np.testing.assert_allclose(stress[20:], 0.8)


@pytest.mark.parametrize("grading", [Grading.UNIFORM, Grading.SINUSOIDAL])
def test_rod_static_tip_displacement(grading):
    model = build_rod(200, grading)
    sys = model.system
    u = spsolve(sys.k.tocsc(), sys.load(0.0))
    p = model.params
    expected = p["load"] * p["length"] / (p["modulus"] * p["area"])
    assert u[-1] == pytest.approx(expected, rel=1e-10)
    np.testing.assert_allclose(u, expected * model.coordinates / p["length"], rtol=1e-9)


def test_equal_materials_bimaterial_rod_matches_homogeneous_rod():
    layered = build_bimaterial_rod(10, {"modulus_left": 800.0})
    plain = build_rod(20, params={"length": 4.0, "modulus": 800.0, "density": 1.0, "load": 1.0})
    np.testing.assert_allclose(layered.coordinates, plain.coordinates, rtol=1e-12)
    np.testing.assert_allclose(
        layered.system.k.toarray(), plain.system.k.toarray(), rtol=1e-12, atol=1e-9
    )
    np.testing.assert_allclose(
        layered.system.m.toarray(), plain.system.m.toarray(), rtol=1e-12, atol=1e-15
    )
    np.testing.assert_allclose(layered.system.load(0.5), plain.system.load(0.5))


def test_build_scalar_wave_small_mesh():
    model = build_scalar_wave(8)
    assert model.system.n_dof == 49
    np.testing.assert_allclose(model.coordinates[model.probes["center"]], [0.5, 0.5])
    assert int(np.count_nonzero(model.v0)) == 25
    assert model.cfl_length == pytest.approx(1.0 / 8.0)
    m = model.system.m.toarray()
    np.testing.assert_allclose(m, m.T)


def test_build_scalar_wave_rejects_coarse_mesh():
    with pytest.raises(ParameterError):
        build_scalar_wave(3)


def test_scalar_wave_reference_initial_state():
    u, v = scalar_wave_reference(0.5, 0.5, [0.0])
    assert u[0] == pytest.approx(0.0, abs=1e-12)
    assert v[0] == pytest.approx(1.0, abs=2e-2)


def test_scalar_wave_reference_outside_patch_starts_at_rest():
    _, v = scalar_wave_reference(0.1, 0.1, [0.0])
    assert v[0] == pytest.approx(0.0, abs=2e-2)


def test_mu_mn():
    assert mu_mn(1, 1) == pytest.approx(np.pi * np.sqrt(2.0))
    assert mu_mn(3, 4, c=2.0, side=0.5) == pytest.approx(2.0 * np.pi / 0.5 * 5.0)


def test_build_three_dof():
    model = build_three_dof()
    assert model.system.n_dof == 2
    assert model.probes == {"u2": 0, "u3": 1}
    np.testing.assert_allclose(model.system.load(np.pi / 2.4), [1.0e7, 0.0])


def test_three_dof_reference_matches_modal_superposition():
    t = np.array([0.0, 7.3])
    u_ref, v_ref, a_ref = three_dof_reference(t)
    u_modal, v_modal, a_modal = three_dof_modal(t, free_modes=(0,))
    np.testing.assert_allclose(u_ref[1], u_modal[1], rtol=1e-8, atol=1e-12)
    np.testing.assert_allclose(v_ref[1], v_modal[1], rtol=1e-8, atol=1e-12)


def test_three_dof_reference_starts_on_forced_stiff_mode():
    _, v, _ = three_dof_reference([0.0])
    assert v[0, 0] == pytest.approx(1.2, rel=1e-5)
    assert v[0, 1] == pytest.approx(0.0, abs=1e-5)


def test_three_dof_full_modal_solution_starts_at_rest():
    u, v, _ = three_dof_modal([0.0])
    np.testing.assert_allclose(u[0], 0.0, atol=1e-12)
    np.testing.assert_allclose(v[0], 0.0, atol=1e-9)


def test_reaction_force():
    model = build_three_dof()
    t = 0.5
    assert reaction_force(model, [0.0, 0.0], t) == pytest.approx(1.0e7 * np.sin(1.2 * t))
    record = HistoryRecord(t=t, u=np.array([np.sin(1.2 * t), 0.0]), v=np.zeros(2), a=np.zeros(2))
    history = [record]
    np.testing.assert_allclose(reaction_history(model, history), [0.0], atol=1e-6)


def test_sdof_reference_solves_equation_of_motion():
    t = np.linspace(0.0, 2.0, 11)
    u, v, a = sdof_reference(t)
    np.testing.assert_allclose(a + 4 * np.pi**2 * u, np.sin(3.0 * t), atol=1e-12)
    assert u[0] == 0.0
    assert v[0] == pytest.approx(0.0)


def test_build_sdof():
    model = build_sdof()
    assert model.system.n_dof == 1
    assert model.wave_speed is None
    assert set(model.reference(np.array([0.1]))) == {"x_u_ref", "x_v_ref"}


def test_sdof_error_zero_at_exact_state():
    model = build_sdof()
    u, v, _ = sdof_reference([1.0])
    assert sdof_error(model.params, 1.0, u[0], v[0]) == 0.0


def test_richardson_levels():
    levels = richardson_levels([0.1, 0.05, 0.025], [1e-2, 1.25e-3, 1.5625e-4])
    assert levels[0].order_estimate is None
    assert levels[1].order_estimate == pytest.approx(3.0)
    assert levels[2].order_estimate == pytest.approx(3.0)


@pytest.mark.parametrize(
    "spec,n_dof",
    [
        (ProblemSpec(ProblemKind.THREE_DOF), 2),
        (ProblemSpec(ProblemKind.SDOF), 1),
        (ProblemSpec(ProblemKind.ROD, elements=30), 30),
        (ProblemSpec(ProblemKind.ROD, elements=30, grading=Grading.SINUSOIDAL), 30),
        (ProblemSpec(ProblemKind.BIMATERIAL_ROD, elements=10), 20),
        (ProblemSpec(ProblemKind.SCALAR_WAVE_2D, elements=6), 25),
    ],
)
def test_build_model_dispatch(spec, n_dof):
    assert build_model(spec).system.n_dof == n_dof


def test_build_model_passes_overrides():
    model = build_model(ProblemSpec(ProblemKind.ROD, elements=10, overrides={"length": 5.0}))
    assert model.coordinates[-1] == pytest.approx(5.0)
