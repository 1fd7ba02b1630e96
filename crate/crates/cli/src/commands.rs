use std::collections::BTreeMap;

use bsf_core::bell::{
    bell_success, entanglement_measure, scheme_table, kraus_operators, reconstruct_povm, success_probability,
    BellError, BqiResult,
};
use bsf_core::fock::{basis_size, enumerate_basis, evolve, outcome_distribution, StateVector, PROBABILITY_FLOOR};
use bsf_core::linalg::{max_abs_diff, ExactPhase, MonomialMatrix, TransferMatrix};
use bsf_core::stabilizer::{
    apply_monomial, conjugate_group, measure_stabilizers, monomial_from_matrix, projector_norm, suppressed_outcomes,
    Character, StabilizerGroup, DEFAULT_MAX_ORDER, MONOMIAL_TOL,
};
use ndarray::Array2;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{parse_phase, CircuitSpec};
use crate::document::{Cell, Payload, ResultDocument, Table};
use crate::error::CliError;
use crate::states::parse_state;

/// Oracle and audit threshold.
const CHECK_TOL: f64 = 1e-8;
const AUDIT_TOL: f64 = 1e-10;
/// An explicit `--input` has to sit in the eigenspace to this precision.
const EIGENSPACE_TOL: f64 = 1e-9;

/// A finished document plus a failed check, if any, that should set the
/// exit status after the document is written.
pub struct Outcome {
    pub doc: ResultDocument,
    pub failure: Option<CliError>,
}

impl Outcome {
    fn ok(doc: ResultDocument) -> Self {
        Self { doc, failure: None }
    }
}

pub struct CircuitArg {
    pub text: String,
    pub flag: &'static str,
}

impl CircuitArg {
    fn parse(&self) -> Result<CircuitSpec, CliError> {
        CircuitSpec::parse(&self.text).map_err(|e| CliError::parse(self.flag, e))
    }
}

fn build(spec: &CircuitSpec, flag: &str, modes: usize) -> Result<TransferMatrix, CliError> {
    if spec.min_modes() > modes {
        return Err(CliError::input(format!("{flag} needs {} modes, the problem has {modes}", spec.min_modes())));
    }
    spec.build(modes).map_err(|e| CliError::parse(flag, e))
}

fn state_arg(text: &str) -> Result<StateVector, CliError> {
    parse_state(text).map_err(|e| CliError::parse("--input", e))
}

fn fock_cell(s: &bsf_core::fock::FockState) -> Cell {
    Cell::text(s.to_string())
}

fn turns(p: ExactPhase) -> String {
    match p.turns() {
        (0, _) => "0".into(),
        (n, 1) => n.to_string(),
        (n, d) => format!("{n}/{d}"),
    }
}

fn char_turns(c: &Character) -> String {
    if c.generator_values().is_empty() {
        return "trivial".into();
    }
    c.generator_values().iter().map(|p| turns(*p)).collect::<Vec<_>>().join(" ")
}

pub fn evolve_cmd(circuit: &CircuitArg, input: &str) -> Result<Outcome, CliError> {
    let spec = circuit.parse()?;
    let state = state_arg(input)?;
    let u = build(&spec, circuit.flag, state.modes())?;
    let out = evolve(&state, &u)?;
    let mut t = Table::new("outcomes", &["outcome", "probability"]);
    let dist = outcome_distribution(&out);
    let total: f64 = dist.iter().map(|(_, p)| p).sum();
    for (s, p) in &dist {
        t.push(vec![fock_cell(s), Cell::num(*p)]);
    }
    let inputs = BTreeMap::from([("circuit".into(), spec.source().into()), ("input".into(), input.into())]);
    let notes = vec![format!("{} outcomes above {PROBABILITY_FLOOR:e}, total probability {total:.12}", dist.len())];
    Ok(Outcome::ok(ResultDocument::new("evolve", inputs, Payload { tables: vec![t], notes })))
}

pub struct GroupArgs {
    pub gens: Vec<String>,
    pub chars: Vec<String>,
}

impl GroupArgs {
    fn min_modes(&self) -> Result<usize, CliError> {
        let mut m = 0;
        for g in &self.gens {
            m = m.max(CircuitSpec::parse(g).map_err(|e| CliError::parse("--gen", e))?.min_modes());
        }
        Ok(m)
    }

    fn group(&self, modes: usize) -> Result<StabilizerGroup, CliError> {
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let spec = CircuitSpec::parse(g).map_err(|e| CliError::parse("--gen", e))?;
                let u = build(&spec, "--gen", modes)?;
                let mono = monomial_from_matrix(&u, MONOMIAL_TOL)?.into_exact()?;
                Ok(mono)
            })
            .collect::<Result<Vec<MonomialMatrix>, CliError>>()?;
        Ok(StabilizerGroup::closure(modes, gens, DEFAULT_MAX_ORDER)?)
    }

    fn character(&self, group: &StabilizerGroup) -> Result<Character, CliError> {
        if self.chars.is_empty() {
            return Ok(Character::trivial(group));
        }
        let values = self
            .chars
            .iter()
            .map(|c| parse_phase(c).map_err(|e| CliError::parse("--char", e)))
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(Character::from_generators(group, &values)?)
    }

    fn echo(&self, inputs: &mut BTreeMap<String, String>) {
        for (i, g) in self.gens.iter().enumerate() {
            inputs.insert(format!("gen.{i}"), g.clone());
        }
        for (i, c) in self.chars.iter().enumerate() {
            inputs.insert(format!("char.{i}"), c.clone());
        }
    }
}

/// `Σ_g λ(g)⁻¹ B(g)|φ⟩` for a seeded random `|φ⟩`, normalized, or `None` if
/// the projection vanishes.
fn sample_eigenstate(
    group: &StabilizerGroup,
    lambda: &Character,
    modes: usize,
    photons: usize,
    seed: u64,
) -> Result<Option<StateVector>, CliError> {
    let basis = enumerate_basis(modes, photons)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc: BTreeMap<_, C64> = BTreeMap::new();
    for s in basis.states() {
        let c = C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        for (i, g) in group.elements().iter().enumerate() {
            let (image, phase) = apply_monomial(g, s);
            *acc.entry(image).or_insert(C64::new(0.0, 0.0)) +=
                lambda.value(i).inverse().to_complex() * phase.to_complex() * c;
        }
    }
    let v = StateVector::from_terms(modes, acc)?;
    Ok(if v.norm_sqr() < 1e-20 { None } else { Some(v.normalized()) })
}

pub struct SuppressArgs<'a> {
    pub circuit: &'a CircuitArg,
    pub group: GroupArgs,
    pub photons: Option<usize>,
    pub modes: Option<usize>,
    pub input: Option<String>,
    pub seed: u64,
}

pub fn suppress_cmd(args: SuppressArgs<'_>) -> Result<Outcome, CliError> {
    let spec = args.circuit.parse()?;
    let input = args.input.as_deref().map(state_arg).transpose()?;
    let modes = match (&input, args.modes) {
        (Some(s), Some(m)) if s.modes() != m => {
            return Err(CliError::input(format!("--modes {m} disagrees with the {}-mode input", s.modes())))
        }
        (Some(s), _) => s.modes(),
        (None, Some(m)) => m,
        (None, None) => spec.min_modes().max(args.group.min_modes()?),
    };
    let photons = match (&input, args.photons) {
        (Some(s), Some(n)) if s.photons() != n => {
            return Err(CliError::input(format!("--n {n} disagrees with the {}-photon input", s.photons())))
        }
        (Some(s), _) => s.photons(),
        (None, Some(n)) => n,
        (None, None) => return Err(CliError::input("give the photon number with --n or a sample state with --input")),
    };
    let u = build(&spec, args.circuit.flag, modes)?;
    let group = args.group.group(modes)?;
    let lambda = args.group.character(&group)?;
    let conj = conjugate_group(&u, &group)?;
    let basis = enumerate_basis(modes, photons)?;
    let sup = suppressed_outcomes(&conj.group, &conj.transport(&lambda), &basis)?;

    let sample = match input {
        Some(s) => {
            let p = projector_norm(&group, &lambda, &s)?;
            if p < 1.0 - EIGENSPACE_TOL {
                return Err(CliError::input(format!("--input has weight {p:.6} in the requested eigenspace, not 1"))
                    .with_hint("omit --input to audit with a projected random state"));
            }
            Some(s)
        }
        None => sample_eigenstate(&group, &lambda, modes, photons, args.seed)?,
    };
    let evolved = sample.as_ref().map(|s| evolve(s, &u)).transpose()?;

    let mut t = Table::new("suppressed", &["outcome", "audit_amplitude"]);
    let mut worst: f64 = 0.0;
    for s in &sup {
        let audit = match &evolved {
            Some(out) => {
                let a = out.amplitude(s).norm();
                worst = worst.max(a);
                Cell::num(a)
            }
            None => Cell::text("n/a"),
        };
        t.push(vec![fock_cell(s), audit]);
    }

    let mut inputs = BTreeMap::from([
        ("circuit".into(), spec.source().to_string()),
        ("modes".into(), modes.to_string()),
        ("photons".into(), photons.to_string()),
    ]);
    args.group.echo(&mut inputs);
    match &args.input {
        Some(s) => {
            inputs.insert("input".into(), s.clone());
        }
        None => {
            inputs.insert("seed".into(), args.seed.to_string());
        }
    }
    let mut notes = vec![format!(
        "{} of {} outcomes suppressed (|G| = {}, λ = {})",
        sup.len(),
        basis.len(),
        group.order(),
        char_turns(&lambda)
    )];
    let mut failure = None;
    if evolved.is_some() {
        let status = if worst < AUDIT_TOL { "PASS" } else { "FAIL" };
        notes.push(format!("max audit amplitude {worst:.3e} < {AUDIT_TOL:e}: {status}"));
        if worst >= AUDIT_TOL {
            failure = Some(CliError::consistency(format!("suppressed outcome has amplitude {worst:.3e}")));
        }
    } else {
        notes.push("the eigenspace is empty at this photon number; nothing to audit".into());
    }
    Ok(Outcome { doc: ResultDocument::new("suppress", inputs, Payload { tables: vec![t], notes }), failure })
}

pub fn measure_cmd(circuit: &CircuitArg, group_args: GroupArgs, input: &str) -> Result<Outcome, CliError> {
    let spec = circuit.parse()?;
    let state = state_arg(input)?;
    let u = build(&spec, circuit.flag, state.modes())?;
    let group = group_args.group(state.modes())?;
    let stats = measure_stabilizers(&group, &u, &state)?;
    let mut t = Table::new("characters", &["lambda_turns", "eigenvalues", "probability"]);
    for (lambda, p) in &stats {
        if *p > PROBABILITY_FLOOR {
            t.push(vec![Cell::text(char_turns(lambda)), Cell::text(lambda.to_string()), Cell::num(*p)]);
        }
    }
    let total: f64 = stats.iter().map(|(_, p)| p).sum();
    let mut inputs =
        BTreeMap::from([("circuit".into(), spec.source().to_string()), ("input".into(), input.to_string())]);
    group_args.echo(&mut inputs);
    let notes = vec![format!("|G| = {}, {} characters, total weight {total:.12}", group.order(), stats.len())];
    Ok(Outcome::ok(ResultDocument::new("measure", inputs, Payload { tables: vec![t], notes })))
}

pub struct BellArgs {
    pub m: Option<usize>,
    pub table: bool,
    pub m_max: Option<usize>,
    pub povm: bool,
    pub oracle: bool,
    pub force: bool,
}

fn success_row(t: &mut Table, m: usize) -> Result<bool, CliError> {
    let p = success_probability(m)?;
    let e = entanglement_measure(m)?;
    t.push(vec![
        Cell::int(m),
        Cell::text(p.exact.to_string()),
        Cell::num(p.value),
        Cell::num(e),
        Cell::text(p.odd_extension.to_string()),
    ]);
    Ok(p.odd_extension)
}

fn kraus_tables(bqi: &BqiResult) -> (Table, Table) {
    let mut k =
        Table::new("kraus", &["label", "c00_re", "c00_im", "c01_re", "c01_im", "c10_re", "c10_im", "c11_re", "c11_im"]);
    for op in &bqi.kraus {
        let mut row = vec![Cell::text(op.label.to_string())];
        for z in op.row {
            row.push(Cell::num(z.re));
            row.push(Cell::num(z.im));
        }
        k.push(row);
    }
    let mut p = Table::new("povm", &["label", "row", "col", "re", "im"]);
    for (label, e) in &bqi.classes {
        for ((i, j), z) in e.indexed_iter() {
            p.push(vec![Cell::text(label.to_string()), Cell::int(i), Cell::int(j), Cell::num(z.re), Cell::num(z.im)]);
        }
    }
    (k, p)
}

fn oracle_table(m: usize, force: bool) -> Result<(Table, Vec<String>, bool), CliError> {
    let layout = bsf_core::bell::DualRailLayout::new(m)?;
    let size = basis_size(layout.modes(), layout.total_photons());
    let oracle = reconstruct_povm(m, force).map_err(|e| {
        let guard = matches!(e, BellError::OracleGuard { .. });
        let err: CliError = e.into();
        if guard {
            CliError { message: format!("{} (basis of {size} states)", err.message), ..err }
        } else {
            err
        }
    })?;
    let closed = kraus_operators(m)?;
    let zero = Array2::<C64>::zeros((4, 4));
    let labels: std::collections::BTreeSet<_> = oracle.classes.keys().chain(closed.classes.keys()).collect();
    let dev = labels
        .into_iter()
        .map(|l| {
            let a = oracle.classes.get(l).unwrap_or(&zero);
            let b = closed.classes.get(l).unwrap_or(&zero);
            max_abs_diff(a.view(), b.view())
        })
        .fold(0.0, f64::max);
    let (so, sc) = (bell_success(&oracle), bell_success(&closed));
    let sdev = so.iter().map(|(b, p)| (p - sc[b]).abs()).fold(0.0, f64::max);
    let checks = [
        ("max POVM deviation", dev),
        ("max success deviation", sdev),
        ("completeness defect", oracle.completeness_defect),
    ];
    let mut t = Table::new("oracle", &["check", "value", "threshold", "status"]);
    let mut notes = Vec::new();
    let mut all = true;
    for (name, v) in checks {
        let pass = v < CHECK_TOL;
        all &= pass;
        let status = if pass { "PASS" } else { "FAIL" };
        t.push(vec![Cell::text(name), Cell::num(v), Cell::num(CHECK_TOL), Cell::text(status)]);
        notes.push(format!("{name} < {CHECK_TOL:e}: {status}"));
    }
    notes.push(format!("oracle basis: {size} states, {} outcome classes", oracle.classes.len()));
    Ok((t, notes, all))
}

pub fn bell_cmd(args: BellArgs) -> Result<Outcome, CliError> {
    if args.m.is_none() && args.m_max.is_none() {
        return Err(CliError::input("give --m, or --table with --m-max"));
    }
    if args.m_max.is_some() && !args.table {
        return Err(CliError::input("--m-max only applies with --table"));
    }
    if (args.povm || args.oracle) && args.m.is_none() {
        return Err(CliError::input("--povm and --oracle need --m"));
    }
    let mut inputs = BTreeMap::new();
    let mut tables = Vec::new();
    let mut notes = Vec::new();
    let mut t = Table::new("success", &["m", "p_exact", "p", "e", "odd_extension"]);
    let mut odd = false;
    match args.m_max {
        Some(m_max) => {
            for row in scheme_table(m_max)? {
                odd |= row.odd_extension;
                t.push(vec![
                    Cell::int(row.m),
                    Cell::text(row.p_exact.to_string()),
                    Cell::num(row.p),
                    Cell::num(row.e),
                    Cell::text(row.odd_extension.to_string()),
                ]);
            }
            inputs.insert("m_max".into(), m_max.to_string());
        }
        None => odd = success_row(&mut t, args.m.expect("checked above"))?,
    }
    tables.push(t);
    if odd {
        notes.push("odd m: P_m = (3 - 1/m)/4, an extension of the even-m formula".into());
    }
    if let Some(m) = args.m {
        inputs.insert("m".into(), m.to_string());
        if args.povm {
            let (k, p) = kraus_tables(&kraus_operators(m)?);
            tables.push(k);
            tables.push(p);
            inputs.insert("povm".into(), "true".into());
        }
    }
    let mut failure = None;
    if args.oracle {
        let m = args.m.expect("checked above");
        let (t, n, pass) = oracle_table(m, args.force)?;
        tables.push(t);
        notes.extend(n);
        inputs.insert("oracle".into(), "true".into());
        inputs.insert("force".into(), args.force.to_string());
        if !pass {
            failure = Some(CliError::consistency(format!(
                "brute-force instrument disagrees with the closed form at m = {m}"
            )));
        }
    }
    Ok(Outcome { doc: ResultDocument::new("bell", inputs, Payload { tables, notes }), failure })
}
