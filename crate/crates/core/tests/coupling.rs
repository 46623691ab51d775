use approx::assert_relative_eq;
use curvepipe::coupling::{
    advance_time_step, apply_wall_law, initial_state, CouplingError, CouplingSettings, ElasticLaw,
    StepOutcome, WallLaw, WallState,
};
use curvepipe::grid::UniformGrid;
use curvepipe::params::{BodyForce, FluidParams};
use curvepipe::pressure::{BoundaryValue, Dirichlet, PressureBC, PressureProblem, TimeMode};

const N: usize = 41;

fn grid() -> UniformGrid {
    UniformGrid::new(N, 1.0).unwrap()
}

fn problem(bc: Dirichlet, mode: TimeMode) -> PressureProblem {
    PressureProblem {
        fluid: FluidParams::new(1.0, 0.5).unwrap(),
        bc: PressureBC::new(bc),
        body: BodyForce::default(),
        kappa: vec![0.0; N],
        mode,
    }
}

fn elastic(young: f64) -> WallLaw {
    WallLaw::AlgebraicElastic(ElasticLaw::new(young, 0.1, vec![1.0; N], 0.0).unwrap())
}

fn run(law: &WallLaw, problem: &PressureProblem, steps: usize, dt: f64) -> Vec<StepOutcome> {
    let mut state = initial_state(grid(), law, &[1.0; N]).unwrap();
    let mut previous = None;
    let mut out: Vec<StepOutcome> = Vec::new();
    for _ in 0..steps {
        let step = advance_time_step(
            &state,
            law,
            problem,
            dt,
            previous.as_ref(),
            &CouplingSettings::default(),
        )
        .unwrap();
        state = step.wall.clone();
        previous = Some(step.pressure.p0.clone());
        out.push(step);
    }
    out
}

#[test]
fn equilibrium_keeps_rest_radius() {
    let pe = 2.5;
    let law = WallLaw::AlgebraicElastic(ElasticLaw::new(50.0, 0.1, vec![1.0; N], pe).unwrap());
    let p = problem(Dirichlet::constant(pe, pe), TimeMode::Unsteady);
    for step in run(&law, &p, 3, 0.1) {
        assert!(step.wall.r.iter().all(|r| (r - 1.0).abs() <= 1e-12));
        assert!(step.pressure.p0.p.iter().all(|v| (v - pe).abs() <= 1e-12));
    }
}

#[test]
fn stiff_wall_matches_rigid() {
    let bc = Dirichlet {
        inlet: BoundaryValue::Series(vec![(0.0, 1.0), (1.0, 2.0)]),
        outlet: 0.0.into(),
    };
    let p = problem(bc, TimeMode::Unsteady);
    let rigid = run(&WallLaw::Rigid, &p, 4, 0.05);
    let stiff = run(&elastic(1e12), &p, 4, 0.05);
    for (a, b) in rigid.iter().zip(&stiff) {
        let scale = a.pressure.p0.p.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (x, y) in a.pressure.p0.p.iter().zip(&b.pressure.p0.p) {
            assert!((x - y).abs() <= 1e-9 * scale, "{x} {y}");
        }
        for (x, y) in a.wall.r.iter().zip(&b.wall.r) {
            assert!((x - y).abs() <= 1e-9);
        }
    }
}

#[test]
fn converged_steps_satisfy_law_and_pressure_equation() {
    let bc = Dirichlet {
        inlet: BoundaryValue::Series(vec![(0.0, 0.0), (0.2, 1.0)]),
        outlet: 0.0.into(),
    };
    let p = problem(bc, TimeMode::Unsteady);
    let law = elastic(200.0);
    let WallLaw::AlgebraicElastic(elastic_law) = &law else {
        unreachable!()
    };
    let steps = run(&law, &p, 5, 0.04);
    for step in &steps {
        assert!(elastic_law.residual(&step.pressure.p0.p, &step.wall.r) <= 1e-9);
        let [r0, r1, r2] = step.pressure.residuals(&step.wall, &p.fluid);
        assert!(r0 <= 1e-8 && r1 <= 1e-8 && r2 <= 1e-8, "{r0} {r1} {r2}");
        assert!(step.history.last().unwrap() <= &1e-10);
        assert!(step.pressure.p0.dtdp.is_some());
    }
    // inflating while the inlet pressure rises
    let mid = N / 4;
    assert!(steps[0].wall.dr_dt[mid] > 0.0);
    assert!(steps[0].wall.r[mid] > 1.0);
}

#[test]
fn rigid_step_has_no_wall_motion() {
    let p = problem(Dirichlet::constant(1.0, 0.0), TimeMode::Steady);
    let step = &run(&WallLaw::Rigid, &p, 1, 0.1)[0];
    assert!(step.wall.dr_dt.iter().all(|v| *v == 0.0));
    assert_eq!(step.iterations, 1);
    assert!(step
        .pressure
        .p0
        .dtdp
        .as_ref()
        .unwrap()
        .iter()
        .all(|v| *v == 0.0));
}

#[test]
fn collapse_is_reported() {
    let law = ElasticLaw::new(1.0, 0.1, vec![1.0; 3], 0.0).unwrap();
    assert!(matches!(
        apply_wall_law(&law, &[0.0, -20.0, 0.0]),
        Err(CouplingError::Collapse { index: 1, .. })
    ));
}

#[test]
fn bad_inputs() {
    let state = WallState::uniform(grid(), 0.0, 1.0, 0.0).unwrap();
    let p = problem(Dirichlet::constant(1.0, 0.0), TimeMode::Steady);
    let settings = CouplingSettings::default();
    assert_eq!(
        advance_time_step(&state, &WallLaw::Rigid, &p, 0.0, None, &settings).unwrap_err(),
        CouplingError::BadTimeStep(0.0)
    );
    assert!(ElasticLaw::new(-1.0, 0.1, vec![1.0], 0.0).is_err());
    assert!(ElasticLaw::new(1.0, 0.1, vec![0.0], 0.0).is_err());
}

#[test]
fn iteration_cap_reports_history() {
    let state = WallState::uniform(grid(), 0.0, 1.0, 0.0).unwrap();
    let p = problem(Dirichlet::constant(1.0, 0.0), TimeMode::Steady);
    let settings = CouplingSettings {
        max_iterations: 3,
        ..CouplingSettings::default()
    };
    match advance_time_step(&state, &elastic(20.0), &p, 0.1, None, &settings) {
        Err(CouplingError::Divergence {
            iterations,
            history,
        }) => {
            assert_eq!(iterations, 3);
            assert_eq!(history.len(), 3);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn steady_state_of_elastic_pipe() {
    // with constant inlet pressure the wall settles: dR/dt -> 0
    let p = problem(Dirichlet::constant(1.0, 0.0), TimeMode::Unsteady);
    let steps = run(&elastic(100.0), &p, 60, 0.5);
    let last = steps.last().unwrap();
    let rate = last.wall.dr_dt.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(rate < 1e-6, "{rate}");
    let WallLaw::AlgebraicElastic(law) = elastic(100.0) else {
        unreachable!()
    };
    let r = apply_wall_law(&law, &last.pressure.p0.p).unwrap();
    for (a, b) in r.iter().zip(&last.wall.r) {
        assert_relative_eq!(a, b, epsilon = 1e-9);
    }
}
