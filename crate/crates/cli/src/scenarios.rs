//! The scenario catalogue.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use nalgebra::Vector3;
use serde_json::{json, Value};

use relqi::channel::{
    chsh_optimize_with, cluster_chsh_bound, is_semicausal, teleport, teleport_branch_residual,
    teleport_identity_residual, BipartiteOperation, ChshStrategy, Direction, Party, ProbeConfig,
};
use relqi::horizon::{
    detector_response, evaporate, evaporate_rk4, rindler_mode_state, superscattering, superscattering_certificate,
    thermal_oscillator_entropy, unruh_temperature, BlackHole, PhysicalConstants,
};
use relqi::linalg;
use relqi::photon::{
    doppler_error_ratio, effective_density_matrix, linear_pair, naive_density_matrix, povm_expectation,
    random_packet, Axis, DirectionGrid,
};
use relqi::qstate::{von_neumann_entropy, Bell, DensityMatrix, LogBase, PureState};
use relqi::random::{haar_state, haar_unitary, random_density_matrix, trial_rng};
use relqi::wavepacket::{
    beta_for_gamma, bipartite_boost_concurrence, entropy_surface, packet_error_scaling,
    BipartiteSpec, GridSpec,
};

use crate::output::Cell;
use crate::params::Params;
use crate::CliError;

pub const SCENARIOS: [&str; 13] = [
    "fig2-entropy",
    "pe-gamma-scaling",
    "bipartite-concurrence",
    "photon-doppler",
    "photon-povm",
    "causality-bell",
    "teleport-check",
    "chsh",
    "cluster-bound",
    "unruh",
    "rindler",
    "blackhole-evaporate",
    "superscatter-demo",
];

/// Scenario result before metadata is attached.
#[derive(Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: BTreeMap<String, Value>,
    /// Tolerances the scenario applied, for the metadata header.
    pub tolerances: BTreeMap<String, String>,
}

impl Table {
    fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), ..Default::default() }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn note(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.insert(key.to_string(), value.into());
    }
}

macro_rules! row {
    ($($x:expr),* $(,)?) => { vec![$(Cell::from($x)),*] };
}

pub fn run(name: &str, p: &Params, seed: u64) -> Result<Table, CliError> {
    match name {
        "fig2-entropy" => fig2_entropy(p),
        "pe-gamma-scaling" => pe_gamma_scaling(p),
        "bipartite-concurrence" => bipartite_concurrence(p),
        "photon-doppler" => photon_doppler(p),
        "photon-povm" => photon_povm(p, seed),
        "causality-bell" => causality_bell(p, seed),
        "teleport-check" => teleport_check(p, seed),
        "chsh" => chsh(p),
        "cluster-bound" => cluster_bound(p),
        "unruh" => unruh(p),
        "rindler" => rindler(p),
        "blackhole-evaporate" => blackhole_evaporate(p),
        "superscatter-demo" => superscatter_demo(p, seed),
        other => Err(CliError::Usage(format!("unknown scenario `{other}`; known: {}", SCENARIOS.join(", ")))),
    }
}

fn grid(p: &Params, points: usize) -> Result<GridSpec<f64>, CliError> {
    Ok(GridSpec { points: p.count("grid.points", points, 1, 61)?, extent: p.float("grid.extent", 4.0, 0.0, 20.0)? })
}

fn axis(p: &Params, key: &str, default: [f64; 3]) -> Result<Vector3<f64>, CliError> {
    let v = p.floats(key, &default, -1e6, 1e6)?;
    if v.len() != 3 || v.iter().all(|x| *x == 0.0) {
        return Err(CliError::Validation(format!("parameter `{key}` must be a non-zero 3-vector")));
    }
    Ok(Vector3::new(v[0], v[1], v[2]))
}

fn fig2_entropy(p: &Params) -> Result<Table, CliError> {
    let delta = p.float("delta", 0.5, 1e-6, 10.0)?;
    let gammas = p.floats("gammas", &[0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3], 0.0, 10.0)?;
    let thetas = p.floats("thetas", &[0.0, PI / 4.0, FRAC_PI_2, 3.0 * PI / 4.0, PI], -2.0 * PI, 2.0 * PI)?;
    let g = grid(p, 11)?;
    p.finish()?;
    let betas: Vec<f64> = gammas.iter().map(|x| beta_for_gamma(delta, *x)).collect::<Result<_, _>>()?;
    let mut t = Table::new(&["theta_rad", "gamma", "entropy_nats", "beta"]);
    for row in entropy_surface(delta, &betas, &thetas, g)? {
        t.push(row![row.theta, row.gamma, row.entropy, row.beta]);
    }
    Ok(t)
}

fn pe_gamma_scaling(p: &Params) -> Result<Table, CliError> {
    let delta = p.float("delta", 0.1, 1e-6, 10.0)?;
    let gammas = p.floats("gammas", &[0.0125, 0.025, 0.05], 1e-9, 10.0)?;
    let theta = p.float("theta", FRAC_PI_2, -2.0 * PI, 2.0 * PI)?;
    let g = grid(p, 11)?;
    p.finish()?;
    let rep = packet_error_scaling(delta, &gammas, theta, g)?;
    let mut t = Table::new(&["gamma", "beta", "p_e", "p_e_restored"]);
    for i in 0..rep.gammas.len() {
        t.push(row![rep.gammas[i], rep.betas[i], rep.error_probabilities[i], rep.restored[i]]);
    }
    t.note("exponent", rep.exponent);
    Ok(t)
}

fn bipartite_concurrence(p: &Params) -> Result<Table, CliError> {
    let delta = p.float("delta", 0.3, 1e-6, 10.0)?;
    let rapidities = p.floats("rapidities", &[0.0, 0.5, 1.0, 2.0], -10.0, 10.0)?;
    let ax = axis(p, "axis", [0.0, 0.0, 1.0])?;
    let spec = BipartiteSpec {
        points: p.count("grid.points", BipartiteSpec::<f64>::DEFAULT_POINTS, 3, 15)?,
        extent: p.float("grid.extent", 4.0, 0.0, 20.0)?,
        ..BipartiteSpec::symmetric(delta)
    };
    p.finish()?;
    let mut t = Table::new(&["rapidity", "concurrence", "restored"]);
    for r in bipartite_boost_concurrence(&spec, &rapidities, ax)? {
        t.push(row![r.rapidity, r.concurrence, r.restored]);
    }
    Ok(t)
}

fn photon_doppler(p: &Params) -> Result<Table, CliError> {
    let aperture = p.float("aperture", 0.05, 1e-6, 3.0)?;
    let speeds = p.floats("speeds", &[-0.5, -0.25, 0.0, 0.25, 0.5], -0.999_999, 0.999_999)?;
    let dg = DirectionGrid {
        polar: p.count("grid.polar", DirectionGrid::default().polar, 2, 512)?,
        azimuthal: p.count("grid.azimuthal", DirectionGrid::default().azimuthal, 1, 1024)?,
    };
    p.finish()?;
    let (x, y) = linear_pair(aperture, dg)?;
    let mut t = Table::new(&["v", "p_e", "p_e_boosted", "ratio", "expected_ratio", "trace_deficit"]);
    for v in speeds {
        let r = doppler_error_ratio((&x, &y), v)?;
        t.push(row![v, r.p_e, r.p_e_boosted, r.ratio, (1.0 + v) / (1.0 - v), r.trace_deficit]);
    }
    Ok(t)
}

fn photon_povm(p: &Params, seed: u64) -> Result<Table, CliError> {
    let packets = p.count("packets", 500, 1, 1_000_000)?;
    let max_modes = p.count("max_modes", 16, 1, 10_000)?;
    p.finish()?;
    let mut t = Table::new(&["packet", "modes", "e_x", "e_y", "e_z", "total", "effective_vs_naive"]);
    let (mut worst_total, mut worst_gap): (f64, f64) = (0.0, 0.0);
    for i in 0..packets as u64 {
        let packet = random_packet(&mut trial_rng(seed, i), max_modes)?;
        let e: Vec<f64> = Axis::ALL.iter().map(|a| povm_expectation(&packet, *a)).collect::<Result<_, _>>()?;
        let total = e.iter().sum::<f64>();
        let gap = linalg::max_abs(&(effective_density_matrix(&packet)?.matrix() - naive_density_matrix(&packet)?.matrix()));
        worst_total = worst_total.max((total - 1.0).abs());
        worst_gap = worst_gap.max(gap);
        t.push(row![i as usize, packet.modes().len(), e[0], e[1], e[2], total, gap]);
    }
    t.note("max_completeness_error", worst_total);
    t.note("max_effective_vs_naive", worst_gap);
    Ok(t)
}

fn causality_bell(p: &Params, seed: u64) -> Result<Table, CliError> {
    let draws = p.count("haar_draws", 200, 0, 100_000)?;
    let tol = p.float("tol.semicausal", 1e-10, 0.0, 1.0)?;
    p.finish()?;
    let probes = ProbeConfig { haar_draws: draws, seed };
    let ops = [
        BipartiteOperation::<f64>::complete_bell_measurement(),
        BipartiteOperation::incomplete_bell_measurement(),
        BipartiteOperation::conditional_basis_pvm(),
    ];
    let mut t = Table::new(&["operation", "direction", "semicausal", "max_shift", "advantage", "witness"]);
    t.tolerances.insert("tol.semicausal".into(), format!("{tol:?}"));
    let mut reports = Vec::new();
    for op in &ops {
        for dir in [Direction::AToB, Direction::BToA] {
            let verdict = is_semicausal(op, dir, &probes, tol)?;
            let report = verdict.report(op, dir, tol);
            let dir_name = serde_json::to_value(dir).expect("serializable");
            t.push(row![
                op.id.clone(),
                dir_name.as_str().unwrap_or_default().to_string(),
                verdict.semicausal,
                verdict.max_shift,
                report.advantage,
                report.witness_pre_op.clone()
            ]);
            reports.push(serde_json::to_value(&report).expect("serializable"));
        }
    }
    let incomplete = &ops[1];
    let advantage = incomplete.distinguishing_probability(
        Party::Alice,
        &PureState::qubits(&[0, 1]).density(),
        &PureState::qubits(&[0, 0]).density(),
    )?;
    t.note(
        "incomplete_bell_witness",
        json!({ "inputs": ["|01>", "|00>"], "receiver": "Alice", "advantage": advantage }),
    );
    t.note("reports", Value::Array(reports));
    Ok(t)
}

fn teleport_check(p: &Params, seed: u64) -> Result<Table, CliError> {
    let trials = p.count("trials", 100, 1, 1_000_000)?;
    p.finish()?;
    let mut t = Table::new(&["trial", "alpha_re", "alpha_im", "beta_re", "beta_im", "identity_residual", "branch_residual", "min_fidelity"]);
    let (mut worst_res, mut worst_fid): (f64, f64) = (0.0, 0.0);
    for i in 0..trials as u64 {
        let psi = haar_state::<f64, _>(2, &mut trial_rng(seed, i));
        let (a, b) = (psi[0], psi[1]);
        let res = teleport_identity_residual(a, b)?;
        let run = teleport(a, b)?;
        worst_res = worst_res.max(res);
        worst_fid = worst_fid.max((1.0 - run.min_fidelity).abs());
        t.push(row![i as usize, a.re, a.im, b.re, b.im, res, teleport_branch_residual(a, b)?, run.min_fidelity]);
    }
    t.note("max_identity_residual", worst_res);
    t.note("max_fidelity_defect", worst_fid);
    Ok(t)
}

fn chsh(p: &Params) -> Result<Table, CliError> {
    let vis = p.floats("visibilities", &[0.0, 0.25, 0.5, 1.0 / SQRT_2, 0.75, 1.0], 0.0, 1.0)?;
    let strategy = match p.choice("strategy", "analytic", &["analytic", "grid"])? {
        "grid" => ChshStrategy::Grid,
        _ => ChshStrategy::Analytic,
    };
    p.finish()?;
    let singlet = Bell::PsiMinus.state::<f64>().density().into_matrix();
    let mixed = linalg::identity::<f64>(4) * relqi::Complex64::new(0.25, 0.0);
    let mut t = Table::new(&["visibility", "zeta_max", "zeta_expected", "a1", "a2", "b1", "b2"]);
    let fmt = |v: [f64; 3]| format!("{:.6} {:.6} {:.6}", v[0], v[1], v[2]);
    for w in vis {
        let rho = DensityMatrix::new(&singlet * relqi::Complex64::new(w, 0.0) + &mixed * relqi::Complex64::new(1.0 - w, 0.0))?;
        let opt = chsh_optimize_with(&rho, strategy)?;
        let s = opt.settings;
        t.push(row![w, opt.zeta_max, SQRT_2 * w, fmt(s.a1), fmt(s.a2), fmt(s.b1), fmt(s.b2)]);
    }
    Ok(t)
}

fn cluster_bound(p: &Params) -> Result<Table, CliError> {
    let masses = p.floats("masses", &[0.5, 1.0, 2.0], 0.0, 1e6)?;
    let distances = p.floats("distances", &[0.0, 0.5, 1.0, 2.0, 5.0], 0.0, 1e6)?;
    p.finish()?;
    let mut t = Table::new(&["m", "r", "bound"]);
    for &m in &masses {
        for &r in &distances {
            t.push(row![m, r, cluster_chsh_bound(m, r)?]);
        }
    }
    Ok(t)
}

fn constants(p: &Params, default: PhysicalConstants<f64>) -> Result<PhysicalConstants<f64>, CliError> {
    let k = PhysicalConstants::new(
        p.value("const.hbar", default.hbar)?,
        p.value("const.c", default.c)?,
        p.value("const.g", default.g)?,
        p.value("const.k_b", default.k_b)?,
    )?;
    Ok(k)
}

fn unit_constants(p: &Params) -> Result<PhysicalConstants<f64>, CliError> {
    match p.choice("units", "natural", &["natural", "si"])? {
        "si" => constants(p, PhysicalConstants::si()),
        _ => constants(p, PhysicalConstants::geometric()),
    }
}

fn unruh(p: &Params) -> Result<Table, CliError> {
    let k = unit_constants(p)?;
    let accelerations = p.floats("accelerations", &[0.5, 1.0, 2.0 * PI, 10.0], 1e-300, 1e300)?;
    let omegas = p.floats("omegas", &[0.1, 1.0, 3.0], 0.0, 1e300)?;
    p.finish()?;
    let mut t = Table::new(&["a", "omega", "temperature", "response_excitation", "response_deexcitation", "ratio", "boltzmann"]);
    for &a in &accelerations {
        let temp = unruh_temperature(a, &k)?;
        // rates use the acceleration as a frequency, a/c
        let rate = a / k.c;
        for &w in &omegas {
            let up = detector_response(w, rate)?;
            let down = detector_response(-w, rate)?;
            let ratio = if up > 0.0 { Some(down / up) } else { None };
            t.push(row![a, w, temp, up, down, ratio, (2.0 * PI * w / rate).exp()]);
        }
    }
    Ok(t)
}

fn rindler(p: &Params) -> Result<Table, CliError> {
    let omegas = p.floats("omegas", &[0.05, std::f64::consts::LN_2 / (2.0 * PI), 0.5, 1.0], 1e-12, 1e12)?;
    let accelerations = p.floats("accelerations", &[1.0], 1e-12, 1e12)?;
    let n_max = p.count("n_max", 0, 0, 10_000_000)?;
    p.finish()?;
    let mut t = Table::new(&["omega_over_a", "mean_n", "entropy", "omega", "a", "mean_n_closed_form", "entropy_thermal", "n_max", "tail"]);
    for &a in &accelerations {
        for &w in &omegas {
            let st = rindler_mode_state(w, a, n_max)?;
            let n = st.analytic_mean_occupation();
            t.push(row![w / a, st.mean_occupation(), st.entropy(), w, a, n, thermal_oscillator_entropy(n), st.n_max, st.tail]);
        }
    }
    Ok(t)
}

fn blackhole_evaporate(p: &Params) -> Result<Table, CliError> {
    let k = constants(p, PhysicalConstants::si())?;
    let m0 = p.float("m0", 5e11, 1e-300, 1e300)?;
    let k_evap = p.float("k_evap", relqi::horizon::K_EVAP_DEFAULT, 1e-300, 1e300)?;
    let fractions = p.floats("fractions", &[0.0, 0.25, 0.5, 0.75, 0.875, 0.99, 1.0], 0.0, 10.0)?;
    let steps = p.count("ode_steps", 4000, 1, 100_000_000)?;
    p.finish()?;
    let te = k_evap * m0.powi(3);
    let hole = BlackHole::new(m0)?;
    let mut t = Table::new(&["t", "t_over_te", "mass", "mass_ode", "evaporated", "hawking_temperature"]);
    let mut samples = Vec::new();
    for f in fractions {
        let time = f * te;
        let e = evaporate(m0, time, k_evap)?;
        let ode = if e.evaporated { None } else { Some(evaporate_rk4(m0, time, k_evap, steps)?) };
        let temp = if e.evaporated { None } else { Some(BlackHole::new(e.mass)?.hawking_temperature(&k)) };
        t.push(row![time, f, e.mass, ode, e.evaporated, temp]);
        samples.push(json!({ "t": time, "M": e.mass }));
    }
    t.note("M0_kg", m0);
    t.note("t_E_s", te);
    t.note("samples", Value::Array(samples));
    t.note("initial_temperature", hole.hawking_temperature(&k));
    t.note("initial_entropy", hole.bekenstein_entropy(&k));
    t.note("surface_gravity", hole.surface_gravity(&k));
    Ok(t)
}

fn superscatter_demo(p: &Params, seed: u64) -> Result<Table, CliError> {
    let which = p.choice("unitary", "cnot", &["cnot", "swap", "identity", "haar"])?;
    let input = p.choice("input", "plus", &["plus", "zero", "one", "random"])?;
    let d_hole = p.count("hole_dim", 2, 1, 16)?;
    p.finish()?;
    if which != "haar" && d_hole != 2 {
        return Err(CliError::Validation(format!("unitary `{which}` needs hole_dim = 2")));
    }
    let c = |x: f64| relqi::Complex64::new(x, 0.0);
    let s = match which {
        "cnot" => linalg::from_real_rows::<f64>(4, 4, &[1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0.]),
        "swap" => linalg::from_real_rows::<f64>(4, 4, &[1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0., 0., 0., 0., 0., 1.]),
        "identity" => linalg::identity::<f64>(4),
        _ => haar_unitary::<f64, _>(2 * d_hole, &mut trial_rng(seed, 0)),
    };
    let rho = match input {
        "zero" => PureState::basis(2, 0).density(),
        "one" => PureState::basis(2, 1).density(),
        "random" => DensityMatrix::new(random_density_matrix(2, &mut trial_rng(seed, 1)))?,
        _ => DensityMatrix::new(linalg::from_real_rows::<f64>(2, 2, &[1.0, 1.0, 1.0, 1.0]) * c(0.5))?,
    };
    let out = superscattering(&s, &rho, d_hole)?;
    let cert = superscattering_certificate(&s, 2, d_hole)?;
    let mut t = Table::new(&["i", "j", "re", "im"]);
    for i in 0..2 {
        for j in 0..2 {
            let z = out.matrix()[(i, j)];
            t.push(row![i, j, z.re, z.im]);
        }
    }
    t.note("purity_in", rho.purity());
    t.note("purity_out", out.purity());
    t.note("entropy_out", von_neumann_entropy(&out, LogBase::E)?);
    t.note("is_cp", cert.is_cp);
    t.note("choi_min_eig", cert.min_eig);
    Ok(t)
}
