//! The reproduction suite: every published number and substituted property
//! check, grouped into numbered criteria.
//!
//! Statistical entries depend on the seed; deterministic ones do not.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, FRAC_PI_8, PI};
use std::time::{Duration, Instant};

use crate::cqae::{build_cqae_circuit, controlled_q_counts, run_cqae_exact, CQAEConfig};
use crate::error::Result;
use crate::mci::{hit_or_miss, IntegrandPair};
use crate::mlqae::{
    build_schedule, exact_hit_probabilities, mle_estimate, query_count, records_from_json,
    relative_error, run_mlqae, ScheduleKind, ShotRecord, DEFAULT_GRID_POINTS,
};
use crate::noise::{noisy_mlqae, NoiseModel};
use crate::oracle::{random_circuit, routed_matches};
use crate::qaa::{
    amplified_circuit, analytic_success_probability, apply_q_power, build_a, build_q, ProblemSpec,
    RECIPE_VERSION,
};
use crate::report::{ReproEntry, ReproReport, SCHEMA_VERSION};
use crate::rng;
use crate::statevec::{Circuit, StateVector};
use crate::transpile::{
    decompose_mcx, depth, lower, mcx_ancillae, transpile, BasisGateSet, CouplingMap, McxMode,
};

const SIMULATOR_RECORDS: &str = include_str!("../data/records/simulator.json");
const IBMQX2_RECORDS: &str = include_str!("../data/records/ibmqx2.json");
const VIGO_RECORDS: &str = include_str!("../data/records/vigo.json");

/// Shipped count fixtures: `simulator`, `ibmqx2`, `vigo`.
pub fn fixture_records(name: &str) -> Result<Vec<ShotRecord>> {
    let json = match name {
        "simulator" => SIMULATOR_RECORDS,
        "ibmqx2" => IBMQX2_RECORDS,
        "vigo" => VIGO_RECORDS,
        other => return Err(crate::Error::UnknownPreset(other.to_string())),
    };
    records_from_json(json)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReproOptions {
    pub seed: u64,
    pub skip_statistical: bool,
}

type Runner = fn(&ReproOptions) -> Result<Vec<ReproEntry>>;

pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    /// Wall-clock budget, when the criterion has one.
    pub time_limit: Option<Duration>,
    run: Runner,
}

pub struct CriterionOutcome {
    pub entries: Vec<ReproEntry>,
    pub elapsed: Duration,
}

impl CriterionOutcome {
    pub fn passed(&self, limit: Option<Duration>) -> bool {
        self.entries.iter().all(|e| e.pass) && limit.is_none_or(|l| self.elapsed <= l)
    }
}

impl Criterion {
    pub fn run(&self, opts: &ReproOptions) -> Result<CriterionOutcome> {
        let start = Instant::now();
        let mut entries = (self.run)(opts)?;
        let elapsed = start.elapsed();
        for e in &mut entries {
            e.criterion = self.id;
            e.runtime_ms = elapsed.as_secs_f64() * 1e3;
        }
        Ok(CriterionOutcome { entries, elapsed })
    }
}

pub fn criteria() -> Vec<Criterion> {
    let c = |id, name, secs: Option<u64>, run| Criterion {
        id,
        name,
        time_limit: secs.map(Duration::from_secs),
        run,
    };
    vec![
        c(
            1,
            "MLE on simulator counts",
            Some(1),
            mle_simulator as Runner,
        ),
        c(2, "MLE on IBMQX2 counts", Some(1), mle_ibmqx2),
        c(3, "MLE on VIGO counts", None, mle_vigo),
        c(4, "amplification law", None, amplification_law),
        c(5, "query-count equivalence", None, query_counts),
        c(6, "depth affine law and depth properties", None, depth_laws),
        c(
            7,
            "lowering and routing correctness",
            Some(120),
            routing_correctness,
        ),
        c(8, "multi-controlled NOT modes", None, mcx_modes),
        c(9, "phase-estimation readout", None, cqae_behavior),
        c(
            10,
            "classical hit-or-miss integration",
            Some(30),
            classical_mci,
        ),
        c(11, "noise degradation", None, noise_degradation),
    ]
}

/// Runs every criterion and collects the entries.
pub fn paper_repro(opts: &ReproOptions) -> Result<ReproReport> {
    let mut entries = Vec::new();
    for c in criteria() {
        entries.extend(c.run(opts)?.entries);
    }
    let all_passed = entries.iter().all(|e| e.pass);
    Ok(ReproReport {
        schema_version: SCHEMA_VERSION,
        seed: opts.seed,
        recipe_version: RECIPE_VERSION.to_string(),
        skipped_statistical: opts.skip_statistical,
        entries,
        all_passed,
    })
}

fn value(name: &str, reference: f64, computed: f64, tol: f64) -> ReproEntry {
    ReproEntry {
        criterion: 0,
        name: name.to_string(),
        statistical: false,
        paper_value: Some(reference),
        computed_value: computed,
        relative_error: (reference != 0.0).then(|| ((computed - reference) / reference).abs()),
        tolerance: tol,
        pass: (computed - reference).abs() <= tol,
        runtime_ms: 0.0,
        detail: format!("{computed:.6} vs {reference} ± {tol}"),
    }
}

fn check(name: &str, computed: f64, pass: bool, detail: String) -> ReproEntry {
    ReproEntry {
        criterion: 0,
        name: name.to_string(),
        statistical: false,
        paper_value: None,
        computed_value: computed,
        relative_error: None,
        tolerance: 0.0,
        pass,
        runtime_ms: 0.0,
        detail,
    }
}

fn statistical(mut e: ReproEntry) -> ReproEntry {
    e.statistical = true;
    e
}

fn mle_entries(
    fixture: &str,
    theta: (f64, f64),
    amp: (f64, f64),
    errors: Option<((f64, f64), (f64, f64))>,
) -> Result<Vec<ReproEntry>> {
    let fit = mle_estimate(&fixture_records(fixture)?, DEFAULT_GRID_POINTS)?;
    let mut out = vec![
        value(
            &format!("{fixture}.theta_hat"),
            theta.0,
            fit.theta_hat,
            theta.1,
        ),
        value(
            &format!("{fixture}.amplitude_hat"),
            amp.0,
            fit.amplitude_hat,
            amp.1,
        ),
    ];
    if let Some((te, ae)) = errors {
        out.push(value(
            &format!("{fixture}.theta_relative_error"),
            te.0,
            relative_error(fit.theta_hat, FRAC_PI_6),
            te.1,
        ));
        out.push(value(
            &format!("{fixture}.amplitude_relative_error"),
            ae.0,
            relative_error(fit.amplitude_hat, 0.25),
            ae.1,
        ));
    }
    Ok(out)
}

fn mle_simulator(_: &ReproOptions) -> Result<Vec<ReproEntry>> {
    mle_entries("simulator", (0.524, 0.001), (0.2504, 0.001), None)
}

fn mle_ibmqx2(_: &ReproOptions) -> Result<Vec<ReproEntry>> {
    mle_entries(
        "ibmqx2",
        (0.795, 0.001),
        (0.509, 0.002),
        Some(((0.518, 0.003), (1.036, 0.008))),
    )
}

fn mle_vigo(_: &ReproOptions) -> Result<Vec<ReproEntry>> {
    mle_entries(
        "vigo",
        (0.780, 0.001),
        (0.494, 0.002),
        Some(((0.490, 0.003), (0.976, 0.008))),
    )
}

/// `n ∈ 1..=4` domain qubits with a random good set.
fn random_spec(rng: &mut rng::StreamRng) -> ProblemSpec {
    use rand::Rng;
    let n = rng.random_range(1..=4usize);
    let good: Vec<usize> = (0..1usize << n).filter(|_| rng.random_bool(0.4)).collect();
    ProblemSpec::new(n, good).expect("valid instance")
}

fn amplification_law(opts: &ReproOptions) -> Result<Vec<ReproEntry>> {
    let spec = ProblemSpec::parse(2, "01")?;
    let a_op = build_a(&spec);
    let q_op = build_q(&a_op);
    let mut out = Vec::new();
    for (m, reference) in [(0, 0.25), (1, 1.0), (2, 0.25), (4, 1.0)] {
        let p = apply_q_power(&a_op, &q_op, m)?.probability_of(spec.flag_qubit(), true)?;
        out.push(value(&format!("p_flag.m{m}"), reference, p, 1e-9));
    }
    if opts.skip_statistical {
        return Ok(out);
    }

    use rand::Rng;
    let mut rng = rng::stream(opts.seed, 4);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let spec = random_spec(&mut rng);
        let m = rng.random_range(0..=8usize);
        let a_op = build_a(&spec);
        let q_op = build_q(&a_op);
        let p = apply_q_power(&a_op, &q_op, m)?.probability_of(spec.flag_qubit(), true)?;
        worst = worst.max((p - analytic_success_probability(&spec, m)).abs());
    }
    out.push(statistical(check(
        "random_instances.max_deviation",
        worst,
        worst < 1e-9,
        format!("max |P − sin²((2m+1)θ)| = {worst:.2e} over 50 instances"),
    )));

    // Sampled rates against the analytic probabilities, 4σ binomial bands.
    let sched = build_schedule(ScheduleKind::Eis, 4)?;
    let shots = 4096u64;
    let recs = run_mlqae(&spec, &sched, shots, opts.seed)?;
    let probs = exact_hit_probabilities(&spec, &sched)?;
    let worst_sigma = recs
        .iter()
        .zip(&probs)
        .map(|(r, &p)| {
            let sd = (p * (1.0 - p) / shots as f64)
                .sqrt()
                .max(1.0 / shots as f64);
            (r.hits as f64 / shots as f64 - p).abs() / sd
        })
        .fold(0.0, f64::max);
    out.push(statistical(check(
        "sampled_rates.max_sigma",
        worst_sigma,
        worst_sigma < 4.0,
        format!("largest deviation {worst_sigma:.2}σ from analytic rates"),
    )));
    Ok(out)
}

fn query_counts(_: &ReproOptions) -> Result<Vec<ReproEntry>> {
    let spec = ProblemSpec::parse(2, "01")?;
    let mut out = Vec::new();
    for n in 1..=6usize {
        let eis = query_count(&build_schedule(ScheduleKind::Eis, n)?);
        let cqae = if n == 1 {
            0
        } else {
            let cfg = CQAEConfig::new(spec.clone(), n - 1, 1, 0);
            controlled_q_counts(&cfg, &build_cqae_circuit(&cfg)?)
                .iter()
                .sum()
        };
        let want = (1usize << (n - 1)) - 1;
        out.push(check(
            &format!("eis{n}.queries"),
            eis as f64,
            eis == want && cqae == want,
            format!("EIS sum {eis}, controlled-Q count {cqae}, 2^(n-1)-1 = {want}"),
        ));
    }
    Ok(out)
}

fn depth_laws(opts: &ReproOptions) -> Result<Vec<ReproEntry>> {
    let spec = ProblemSpec::parse(2, "01")?;
    let a_op = build_a(&spec);
    let q_op = build_q(&a_op);
    let (da, dq) = (depth(&a_op.circuit), depth(&q_op.circuit));
    let mut out = Vec::new();
    let mut residual = 0i64;
    for (m, reference) in [(0usize, 4.0), (1, 15.0), (2, 26.0), (4, 48.0)] {
        let d = depth(&amplified_circuit(&a_op, &q_op, m));
        residual = residual.max((d as i64 - (da + m * dq) as i64).abs());
        out.push(value(
            &format!("logical_depth.m{m}"),
            reference,
            d as f64,
            0.2 * reference,
        ));
    }
    out.push(check(
        "affine_residual",
        residual as f64,
        residual == 0,
        format!("depth(A) = {da}, depth(Q) = {dq}, largest residual {residual}"),
    ));

    let cqae_depth = |m| -> Result<usize> {
        Ok(depth(&build_cqae_circuit(&CQAEConfig::new(
            spec.clone(),
            m,
            1,
            0,
        ))?))
    };
    let (d1, d3) = (cqae_depth(1)?, cqae_depth(3)?);
    out.push(check(
        "cqae_depth_ratio",
        d3 as f64 / d1 as f64,
        d3 > 5 * d1,
        format!("logical depth {d1} (m=1) vs {d3} (m=3)"),
    ));

    let mcx = decompose_mcx(4, McxMode::Advanced)?;
    let basis = BasisGateSet::default();
    let routed = |name: &str| -> Result<usize> {
        Ok(transpile(&mcx, &basis, &CouplingMap::preset(name)?, None)?.depth)
    };
    let (dx2, dvigo) = (routed("ibmqx2")?, routed("vigo")?);
    out.push(check(
        "mcx4_routed_depth.vigo_over_ibmqx2",
        dvigo as f64 / dx2 as f64,
        dvigo > dx2,
        format!("routed depth {dx2} on ibmqx2 vs {dvigo} on vigo"),
    ));

    if !opts.skip_statistical {
        let mut decreases = 0;
        for i in 0..100u64 {
            let n = 1 + (i as usize % 5);
            let c = random_circuit(n, 12, rng::substream(opts.seed, 6_000 + i));
            if depth(&lower(&c, &basis)?) < depth(&c) {
                decreases += 1;
            }
        }
        out.push(statistical(check(
            "lowering_never_shortens",
            decreases as f64,
            decreases == 0,
            format!("{decreases} of 100 random circuits got shallower"),
        )));
    }
    Ok(out)
}

fn routing_correctness(opts: &ReproOptions) -> Result<Vec<ReproEntry>> {
    if opts.skip_statistical {
        return Ok(Vec::new());
    }
    use rand::seq::SliceRandom;
    let maps = [
        CouplingMap::preset("ibmqx2")?,
        CouplingMap::preset("vigo")?,
        CouplingMap::line(5),
        CouplingMap::full(5),
    ];
    let basis = BasisGateSet::default();
    let mut rng = rng::stream(opts.seed, 7);
    let mut failures = Vec::new();
    for i in 0..100u64 {
        let n = 1 + (i as usize % 5);
        let c = random_circuit(n, 12, rng::substream(opts.seed, 7_000 + i));
        let map = &maps[i as usize % maps.len()];
        let mut physical: Vec<usize> = (0..map.qubits).collect();
        physical.shuffle(&mut rng);
        let layout = &physical[..n];
        let r = transpile(&c, &basis, map, Some(layout))?;
        if !basis.admits(&r.circuit) || !routed_matches(&c, &r, 1e-8) {
            failures.push(i);
        }
    }
    Ok(vec![statistical(check(
        "random_circuits.equivalent",
        failures.len() as f64,
        failures.is_empty(),
        format!(
            "{} of 100 lowered and routed circuits differ: {failures:?}",
            failures.len()
        ),
    ))])
}

/// Checks a decomposed MCX on every control/target input with clean ancillae.
fn mcx_truth_table_exact(c: &Circuit, k: usize) -> Result<bool> {
    let all = (1usize << k) - 1;
    for x in 0..1usize << (k + 1) {
        let mut s = StateVector::basis(c.num_qubits(), x)?;
        s.run(c)?;
        let want = if x & all == all { x ^ (1 << k) } else { x };
        if (s.amplitude(want) - 1.0).norm() > 1e-9 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn mcx_modes(_: &ReproOptions) -> Result<Vec<ReproEntry>> {
    let basic = decompose_mcx(4, McxMode::Basic)?;
    let advanced = decompose_mcx(4, McxMode::Advanced)?;
    let ancillae = mcx_ancillae(4, McxMode::Basic);
    let (db, da) = (depth(&basic), depth(&advanced));
    Ok(vec![
        check(
            "basic.ancillae",
            ancillae as f64,
            ancillae == 2 && basic.num_qubits() == 7,
            format!("{ancillae} ancillae, {} qubits", basic.num_qubits()),
        ),
        check(
            "basic_shallower_than_advanced",
            db as f64 / da as f64,
            db < da,
            format!("depth {db} (basic) vs {da} (advanced)"),
        ),
        check(
            "basic.truth_table",
            1.0,
            mcx_truth_table_exact(&basic, 4)?,
            "all 32 inputs with clean ancillae".into(),
        ),
        check(
            "advanced.truth_table",
            1.0,
            mcx_truth_table_exact(&advanced, 4)?,
            "all 32 inputs".into(),
        ),
    ])
}

fn cqae_behavior(_: &ReproOptions) -> Result<Vec<ReproEntry>> {
    let on_grid = run_cqae_exact(&CQAEConfig::new(ProblemSpec::parse(2, "00,01")?, 2, 1, 0))?;
    let off_grid = run_cqae_exact(&CQAEConfig::new(ProblemSpec::parse(2, "01")?, 3, 1, 0))?;
    let empty = run_cqae_exact(&CQAEConfig::new(ProblemSpec::parse(2, "")?, 3, 1, 0))?;
    let p_on = on_grid.mass_at_theta(FRAC_PI_4);
    let bracket = off_grid.mass_at_theta(FRAC_PI_8) + off_grid.mass_at_theta(FRAC_PI_4);
    Ok(vec![
        value(
            "on_grid.theta_hat",
            FRAC_PI_4,
            on_grid.theta_estimate,
            1e-12,
        ),
        value("on_grid.probability", 1.0, p_on, 1e-9),
        check(
            "off_grid.bracketing_mass",
            bracket,
            bracket > 0.8,
            format!("mass {bracket:.4} on π/8 and π/4"),
        ),
        value("empty.amplitude_hat", 0.0, empty.amplitude_estimate, 1e-12),
    ])
}

fn classical_mci(opts: &ReproOptions) -> Result<Vec<ReproEntry>> {
    if opts.skip_statistical {
        return Ok(Vec::new());
    }
    let pair = IntegrandPair::preset("sinpi")?;
    let target = 2.0 / PI;
    let mut within = 0;
    let mut mean = 0.0;
    for i in 0..100u64 {
        let r = hit_or_miss(&pair, 1_000_000, rng::substream(opts.seed, 10_000 + i))?;
        mean += r.estimate / 100.0;
        if (r.estimate - target).abs() <= 0.005 {
            within += 1;
        }
    }
    Ok(vec![
        statistical(check(
            "sinpi.fraction_within_0.005",
            within as f64 / 100.0,
            within >= 99,
            format!("{within}/100 seeds within 0.005 of 2/π"),
        )),
        statistical(value("sinpi.mean_estimate", target, mean, 0.005)),
    ])
}

fn noise_degradation(opts: &ReproOptions) -> Result<Vec<ReproEntry>> {
    if opts.skip_statistical {
        return Ok(Vec::new());
    }
    let spec = ProblemSpec::parse(2, "01")?;
    let sched = build_schedule(ScheduleKind::Eis, 4)?;
    let base = NoiseModel::preset("ibmqx2-2020-03-28")?;
    let mut means = Vec::new();
    for scale in [0.0, 1.0, 2.0] {
        let model = base.with_scale(scale)?;
        let mut total = 0.0;
        for s in 0..50u64 {
            let recs = noisy_mlqae(
                &spec,
                &sched,
                1024,
                rng::substream(opts.seed, 11_000 + s),
                &model,
            )?;
            total += relative_error(
                mle_estimate(&recs, DEFAULT_GRID_POINTS)?.amplitude_hat,
                0.25,
            );
        }
        means.push(total / 50.0);
    }
    let monotone = means.windows(2).all(|w| w[1] >= w[0]);
    Ok(vec![statistical(check(
        "ibmqx2.mean_amplitude_error_nondecreasing",
        means[2],
        monotone,
        format!(
            "mean relative amplitude error {:.4} / {:.4} / {:.4} at scale 0 / 1 / 2",
            means[0], means[1], means[2]
        ),
    ))])
}
