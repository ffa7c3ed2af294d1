//! The comparison pipeline: generator matrices of the bracket with pairing
//! certificates, fill witnesses for sampled current cycles, cancel witnesses
//! for sampled bounding chains, and the long exact sequence of a pair.
use crate::error::{Error, Result};
use crate::format::{transcript, Space};
use crate::homology::{self, pairing, FormSpec, Setup};
use crate::random::{self, SuiteRng};
use crate::report::{Report, SuiteReport};
use mhom_core::algebra::LongExactSequence;
use mhom_core::bracket::bracket;
use mhom_core::cech::{zigzag_cancel, zigzag_fill, Coefficient, Ladder};
use mhom_core::chains::{to_simplicial, AffineSimplex, LipschitzChain};
use mhom_core::complex::BallCover;
use mhom_core::currents::PolyhedralCurrent;
use mhom_core::geometry::{self, Point};
use num_bigint::BigInt;
use rand::Rng;
use serde_json::json;

/// Subdivision budget handed to the staircase descents.
const DESCENT_BUDGET: usize = 8;

pub struct CompareConfig {
    pub degree: Option<usize>,
    pub depth: usize,
    pub seed: u64,
    /// Fill and cancel cases each.
    pub samples: usize,
}

/// Splits every nondegenerate simplex at a random interior point. The
/// bracket is unchanged; the chain gets vertices off the lattice.
fn split(rng: &mut SuiteRng, c: &LipschitzChain) -> LipschitzChain {
    if c.degree() == 0 {
        return c.clone();
    }
    let mut out = LipschitzChain::zero(c.degree());
    for (s, a) in c.terms() {
        if s.is_degenerate() {
            out.add_term(a, s.clone());
            continue;
        }
        let p = random::point_in(rng, s.vertices(), true);
        for i in 0..s.vertices().len() {
            let mut v = s.vertices().to_vec();
            v[i] = p.clone();
            out.add_term(a, AffineSimplex::new(v));
        }
    }
    out
}

/// A nondegenerate k-simplex inside a random k-face, if there are k-faces.
fn simplex_in_face(rng: &mut SuiteRng, space: &Space, k: usize) -> Option<Vec<Point>> {
    if k > space.complex.dim() {
        return None;
    }
    let faces = space.complex.faces(k);
    let pts = space.complex.points(&faces[rng.gen_range(0..faces.len())]);
    loop {
        let s: Vec<Point> = (0..=k).map(|_| random::point_in(rng, &pts, true)).collect();
        if geometry::is_nondegenerate(&s) {
            return Some(s);
        }
    }
}

fn ladder_for(space: &Space, cover: &BallCover, m: usize, depth: usize) -> Result<Ladder> {
    Ok(Ladder::build(&space.complex, cover, (2 * m).max(1), depth)?)
}

/// Values of the forms on a current.
fn pair_with(forms: &[FormSpec], t: &PolyhedralCurrent) -> Result<Vec<String>> {
    let n = t.ambient_dim();
    forms.iter().map(|f| Ok(crate::format::q_text(&t.evaluate(&f.form(n))?))).collect()
}

pub fn run(space: &Space, pair: Option<&str>, cover: Option<&BallCover>, cfg: &CompareConfig) -> Result<Report> {
    let setup = Setup::new(space, pair)?;
    let absolute = Setup::new(space, None)?;
    let top = setup.degrees().saturating_sub(1);
    let m = cfg.degree.unwrap_or(top.min(1));
    if m > top {
        return Err(Error::Usage(format!("degree {m} exceeds the dimension {top} of {}", space.name)));
    }
    let mut report = Report::new("compare");
    report.set("space", &space.name);
    report.set("pair", pair);
    report.set("degree", m);
    report.set("depth", cfg.depth);
    report.set("seed", cfg.seed);
    report.set("budget", cfg.samples);
    let groups = homology::groups(&setup)?;
    report.text = groups.iter().enumerate().map(|(k, g)| format!("H_{k} = {g}")).collect();

    // (iii) simplicial generators as affine Lipschitz chains
    let mut iota = SuiteReport::new("iota");
    let chains = homology::check_lipschitz_generators(&setup, &mut iota)?;
    report.suites.push(iota);

    // (i) generator matrices of the bracket and pairing certificates
    let mut gens = SuiteReport::new("bracket-generators");
    let certificates = homology::check_current_generators(&setup, &chains, &mut gens)?;
    let cert = &certificates[m];
    let betti = groups[m].betti;
    let complete = cert["pairing"]["rank"].as_u64() == Some(betti as u64);
    gens.check("pairing-nonsingular", m, complete, || cert["pairing"].clone());
    report.suites.push(gens);

    // (iv) long exact sequence of the pair
    if pair.is_some() {
        report.suites.push(les_suite(&setup, &chains)?);
    }

    // (ii) fill and cancel witnesses, on cycles of X
    let abs_chains: Vec<LipschitzChain> = absolute
        .generators(m)?
        .iter()
        .map(|g| homology::lipschitz_generator(&absolute, m, g))
        .collect();
    let free: Vec<PolyhedralCurrent> = absolute
        .basis(m)?
        .free_generators
        .iter()
        .map(|g| bracket(&homology::lipschitz_generator(&absolute, m, g), space.complex.ambient_dim()))
        .collect();
    let forms = pairing(&absolute, m, &free)?.forms;
    let ladder = if m == 0 {
        None
    } else {
        let cover = cover.ok_or_else(|| Error::Usage(format!("space {} has no built-in cover; pass --cover", space.name)))?;
        Some(ladder_for(space, cover, m, cfg.depth)?)
    };
    let empty = Ladder::new(vec![BallCover::new(Vec::new())], Vec::new())?;
    let ladder_ref = ladder.as_ref().unwrap_or(&empty);
    if let Some(l) = &ladder {
        report.set("ladder", l.covers.iter().map(BallCover::len).collect::<Vec<_>>());
    }
    report.suites.push(fill_suite(space, m, &abs_chains, &forms, ladder_ref, cfg)?);
    if let Some(l) = &ladder {
        report.suites.push(cancel_suite(space, m, &abs_chains, l, cfg));
    }
    report.result = json!({
        "groups": groups.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "certificates": certificates,
    });
    Ok(report)
}

fn fill_suite(
    space: &Space,
    m: usize,
    generators: &[LipschitzChain],
    forms: &[FormSpec],
    ladder: &Ladder,
    cfg: &CompareConfig,
) -> Result<SuiteReport> {
    let n = space.complex.ambient_dim();
    let mut suite = SuiteReport::new("fill");
    let mut rng = random::stream(cfg.seed, "compare-fill");
    for case in 0..cfg.samples {
        let mut cycle = LipschitzChain::zero(m);
        for (j, g) in generators.iter().enumerate() {
            let a = if case == 0 { (j == 0) as i64 } else { rng.gen_range(-2..=2) };
            cycle = cycle.add(&g.scale(a));
        }
        let mut t = bracket(&split(&mut rng, &cycle), n);
        if case % 2 == 1 || t.is_zero() {
            if let Some(s) = simplex_in_face(&mut rng, space, m + 1) {
                t = t.add(&PolyhedralCurrent::simplex(s).boundary());
            }
        }
        match zigzag_fill(&t, &space.complex, ladder, DESCENT_BUDGET) {
            Ok(w) => {
                let exact = w.chain.is_cycle() && w.current.boundary() == bracket(&w.chain, n).sub(&t);
                suite.check("boundary", case, exact, || json!({"pieces": t.pieces().len()}));
                let before = pair_with(forms, &t)?;
                let after = pair_with(forms, &bracket(&w.chain, n))?;
                suite.check("pairing-preserved", case, before == after, || json!({"current": before, "chain": after}));
                if case == 0 {
                    suite.detail("transcript", transcript(&w.steps));
                }
            }
            Err(e) => suite.error("boundary", case, e),
        }
    }
    Ok(suite)
}

fn cancel_suite(space: &Space, m: usize, generators: &[LipschitzChain], ladder: &Ladder, cfg: &CompareConfig) -> SuiteReport {
    let n = space.complex.ambient_dim();
    let mut suite = SuiteReport::new("cancel");
    let mut rng = random::stream(cfg.seed, "compare-cancel");
    for case in 0..cfg.samples {
        let a = random::coefficient(&mut rng);
        let mut kind = case % 3;
        if kind == 0 && m + 1 > space.complex.dim() || kind == 2 && generators.is_empty() {
            kind = 1;
        }
        let (c, t) = match kind {
            0 => match simplex_in_face(&mut rng, space, m + 1) {
                Some(s) => {
                    let sigma = LipschitzChain::simplex(s).scale(a);
                    (sigma.boundary(), bracket(&sigma, n))
                }
                None => (LipschitzChain::zero(m), PolyhedralCurrent::zero(m + 1, n)),
            },
            1 => {
                // m + 2 points in an m-face: a degenerate simplex with zero bracket
                let faces = space.complex.faces(m);
                let pts = space.complex.points(&faces[rng.gen_range(0..faces.len())]);
                let s: Vec<Point> = (0..m + 2).map(|_| random::point_in(&mut rng, &pts, true)).collect();
                (LipschitzChain::simplex(s).scale(a).boundary(), PolyhedralCurrent::zero(m + 1, n))
            }
            _ => {
                let g = &generators[rng.gen_range(0..generators.len())];
                (g.sub(&split(&mut rng, g)).scale(a), PolyhedralCurrent::zero(m + 1, n))
            }
        };
        match zigzag_cancel(&c, &t, &space.complex, ladder, DESCENT_BUDGET) {
            Ok((lift, steps)) => {
                suite.check("boundary", case, Coefficient::same(&lift.boundary(), &c), || json!({"kind": kind}));
                if case == 0 {
                    suite.detail("transcript", transcript(&steps));
                }
            }
            Err(e) => suite.error("boundary", case, e),
        }
    }
    suite
}

/// Exactness of the simplicial sequence, and the connecting map computed on
/// affine chains and on their brackets agreeing with it.
fn les_suite(setup: &Setup, chains: &[Vec<LipschitzChain>]) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("long-exact-sequence");
    let cc = setup.complex.chain_complex();
    let les = LongExactSequence::new(&cc, &setup.selection)?;
    for (i, (node, exact)) in les.exactness()?.into_iter().enumerate() {
        suite.check("exact", i, exact, || json!(format!("{node:?}")));
    }
    let n = setup.complex.ambient_dim();
    let mut case = 0;
    for (k, gens) in chains.iter().enumerate().skip(1) {
        let delta = les.connecting(k)?;
        let below = les.sub().homology_basis(k - 1)?;
        for (i, c) in gens.iter().enumerate() {
            let bd = c.boundary();
            suite.check("bracket-commutes", case, bracket(&bd, n) == bracket(c, n).boundary(), || json!({"degree": k}));
            let on_sub = to_simplicial(setup.complex, &bd)
                .map(|full| setup.selection[k - 1].iter().map(|&p| full[p].clone()).collect::<Vec<BigInt>>());
            let class = on_sub.and_then(|x| below.class_of(&x));
            let expected = delta.column(i);
            let ok = class.is_some_and(|got| {
                got.iter().zip(&expected).enumerate().all(|(j, (x, y))| {
                    if j < below.group.betti {
                        x == y
                    } else {
                        ((x - y) % &below.group.torsion[j - below.group.betti]) == BigInt::from(0)
                    }
                })
            });
            suite.check("connecting", case, ok, || json!({"degree": k, "generator": i}));
            case += 1;
        }
    }
    Ok(suite)
}
