//! Homology of a space or pair in the three theories. All three are computed
//! from the simplicial chain complex; the Lipschitz theory realizes the
//! generators as affine chains and the current theory brackets them, so each
//! report carries checks tying its generators back to the simplicial classes.
use crate::error::{Error, Result};
use crate::format::{q_text, Space};
use crate::report::{Report, SuiteReport};
use mhom_core::algebra::{relative_complex, ChainComplexZ, HomologyBasis, HomologyGroup};
use mhom_core::arith::Q;
use mhom_core::bracket::bracket;
use mhom_core::chains::{from_simplicial, to_simplicial, LipschitzChain};
use mhom_core::complex::{MetricComplex, PlFunction};
use mhom_core::currents::{PolyhedralCurrent, TestForm};
use mhom_core::geometry;
use mhom_core::linalg;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Theory {
    Singular,
    Lipschitz,
    Current,
}

impl Theory {
    pub fn name(self) -> &'static str {
        match self {
            Theory::Singular => "singular",
            Theory::Lipschitz => "lipschitz",
            Theory::Current => "current",
        }
    }
}

/// The chain complex of X or of X mod A, with the positions of the faces not
/// in A in each degree.
pub struct Setup<'a> {
    pub complex: &'a MetricComplex,
    pub pair: Option<String>,
    pub chain: ChainComplexZ,
    pub rest: Vec<Vec<usize>>,
    /// Positions of the faces of A per degree; empty without a pair.
    pub selection: Vec<Vec<usize>>,
    pub sub_faces: Vec<Vec<usize>>,
}

impl<'a> Setup<'a> {
    pub fn new(space: &'a Space, pair: Option<&str>) -> Result<Setup<'a>> {
        let complex = &space.complex;
        let cc = complex.chain_complex();
        match pair {
            None => {
                let rest = (0..cc.len()).map(|k| (0..cc.dim(k)).collect()).collect();
                Ok(Setup { complex, pair: None, chain: cc, rest, selection: Vec::new(), sub_faces: Vec::new() })
            }
            Some(name) => {
                let selection = complex.selection(name).map_err(|_| {
                    let known: Vec<&String> = complex.subcomplex_names().collect();
                    Error::Input(format!("space {} has no subcomplex `{name}` (has {known:?})", space.name))
                })?;
                let chain = relative_complex(&cc, &selection)?;
                let rest = cc.complement(&selection);
                let sub_faces = complex.subcomplex_faces(name)?.to_vec();
                Ok(Setup { complex, pair: Some(name.into()), chain, rest, selection, sub_faces })
            }
        }
    }

    pub fn degrees(&self) -> usize {
        self.chain.len()
    }

    /// Absolute coordinates of a relative chain (zero on A).
    pub fn embed(&self, k: usize, x: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.complex.faces(k).len()];
        for (&p, v) in self.rest[k].iter().zip(x) {
            out[p] = v.clone();
        }
        out
    }

    /// Relative coordinates: the part off A.
    pub fn restrict(&self, k: usize, x: &[BigInt]) -> Vec<BigInt> {
        self.rest[k].iter().map(|&p| x[p].clone()).collect()
    }

    pub fn basis(&self, k: usize) -> Result<HomologyBasis> {
        Ok(self.chain.homology_basis(k)?)
    }

    /// Free generators then torsion generators, as relative coordinates.
    pub fn generators(&self, k: usize) -> Result<Vec<Vec<BigInt>>> {
        let b = self.basis(k)?;
        Ok(b.free_generators.iter().cloned().chain(b.torsion_generators.iter().map(|(g, _)| g.clone())).collect())
    }
}

pub fn groups(setup: &Setup) -> Result<Vec<HomologyGroup>> {
    (0..setup.degrees()).map(|k| Ok(setup.chain.homology(k)?)).collect()
}

fn unit(n: usize, i: usize) -> Vec<BigInt> {
    (0..n).map(|j| BigInt::from((i == j) as i32)).collect()
}

/// Class coordinates agree with `expected`, torsion entries modulo their order.
fn same_class(basis: &HomologyBasis, got: &[BigInt], expected: &[BigInt]) -> bool {
    let b = basis.group.betti;
    got.len() == expected.len()
        && got.iter().zip(expected).enumerate().all(|(i, (x, y))| {
            if i < b {
                x == y
            } else {
                let d = &basis.group.torsion[i - b];
                ((x - y) % d).is_zero()
            }
        })
}

pub fn lipschitz_generator(setup: &Setup, k: usize, g: &[BigInt]) -> LipschitzChain {
    from_simplicial(setup.complex, k, &setup.embed(k, g))
}

/// Checks that each generator, realized as an affine Lipschitz chain, is a
/// relative cycle, maps back to the same simplicial chain and has the
/// expected class.
pub fn check_lipschitz_generators(setup: &Setup, suite: &mut SuiteReport) -> Result<Vec<Vec<LipschitzChain>>> {
    let mut all = Vec::new();
    let mut case = 0;
    for k in 0..setup.degrees() {
        let basis = setup.basis(k)?;
        let mut chains = Vec::new();
        for (i, g) in setup.generators(k)?.iter().enumerate() {
            let chain = lipschitz_generator(setup, k, g);
            let back = to_simplicial(setup.complex, &chain);
            let full = setup.embed(k, g);
            suite.check("round-trip", case, back.as_ref() == Some(&full), || json!({"degree": k, "generator": i}));
            let bd = to_simplicial(setup.complex, &chain.boundary()).map(|b| setup.restrict(k.saturating_sub(1), &b));
            let cycle = k == 0 || bd.is_some_and(|b| b.iter().all(Zero::is_zero));
            suite.check("cycle", case, cycle, || json!({"degree": k, "generator": i}));
            let class = basis.class_of(g);
            let ok = class.is_some_and(|c| same_class(&basis, &c, &unit(basis.group.coordinate_count(), i)));
            suite.check("class", case, ok, || json!({"degree": k, "generator": i}));
            chains.push(chain);
            case += 1;
        }
        all.push(chains);
    }
    Ok(all)
}

/// A test form f dx_{π₁} ∧ … with f a coordinate or the constant 1.
#[derive(Clone, Debug, Serialize)]
pub struct FormSpec {
    pub f: Option<usize>,
    pub pi: Vec<usize>,
}

impl FormSpec {
    pub fn form(&self, n: usize) -> TestForm {
        let f = match self.f {
            Some(i) => PlFunction::coordinate(i, n),
            None => PlFunction::constant(Q::one(), n),
        };
        TestForm::new(f, self.pi.iter().map(|&j| PlFunction::coordinate(j, n)).collect())
    }

    pub fn describe(&self) -> String {
        let f = self.f.map_or("1".to_string(), |i| format!("x{i}"));
        let pi: Vec<String> = self.pi.iter().map(|j| format!("dx{j}")).collect();
        if pi.is_empty() {
            f
        } else {
            format!("{f} {}", pi.join("^"))
        }
    }
}

fn minor_vanishes(edges: &[Vec<Q>], cols: &[usize]) -> bool {
    let m: Vec<Vec<Q>> = edges.iter().map(|e| cols.iter().map(|&c| e[c].clone()).collect()).collect();
    linalg::det(&m).is_zero()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for mut rest in subsets(n, k - 1).into_iter().filter(|r| r.first().is_none_or(|&x| x > first)) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Coordinate forms of degree m that are closed on the complex (their
/// exterior derivative vanishes on every (m+1)-face) and vanish on the
/// subcomplex, so their values on cycles depend only on the class.
pub fn closed_forms(setup: &Setup, m: usize) -> Vec<FormSpec> {
    let complex = setup.complex;
    let n = complex.ambient_dim();
    if m == 0 {
        return if setup.pair.is_none() { vec![FormSpec { f: None, pi: Vec::new() }] } else { Vec::new() };
    }
    let upper: Vec<Vec<Vec<Q>>> = if m < complex.dim() {
        complex.faces(m + 1).iter().map(|f| geometry::edge_vectors(&complex.points(f))).collect()
    } else {
        Vec::new()
    };
    let on_sub: Vec<Vec<Vec<Q>>> = setup
        .sub_faces
        .iter()
        .filter(|f| f.len() == m + 1)
        .map(|f| geometry::edge_vectors(&complex.points(f)))
        .collect();
    let mut out = Vec::new();
    for pi in subsets(n, m) {
        if !on_sub.iter().all(|e| minor_vanishes(e, &pi)) {
            continue;
        }
        // dx_J itself is closed; it only detects relative classes
        if setup.pair.is_some() {
            out.push(FormSpec { f: None, pi: pi.clone() });
        }
        for f in (0..n).filter(|i| !pi.contains(i)) {
            let mut cols = vec![f];
            cols.extend(&pi);
            if upper.iter().all(|e| minor_vanishes(e, &cols)) {
                out.push(FormSpec { f: Some(f), pi: pi.clone() });
            }
        }
    }
    out
}

/// Pairing of the free generators with closed forms, keeping forms greedily
/// while they raise the rank.
pub struct Pairing {
    pub forms: Vec<FormSpec>,
    pub matrix: Vec<Vec<Q>>,
    pub rank: usize,
}

pub fn pairing(setup: &Setup, m: usize, currents: &[PolyhedralCurrent]) -> Result<Pairing> {
    let n = setup.complex.ambient_dim();
    let mut chosen: Vec<FormSpec> = Vec::new();
    let mut columns: Vec<Vec<Q>> = Vec::new();
    let mut rank = 0;
    for candidate in closed_forms(setup, m) {
        if rank == currents.len() {
            break;
        }
        let w = candidate.form(n);
        let col: Vec<Q> = currents.iter().map(|t| t.evaluate(&w)).collect::<mhom_core::Result<_>>()?;
        let mut trial = columns.clone();
        trial.push(col.clone());
        let r = linalg::rank(&trial);
        if r > rank {
            rank = r;
            columns = trial;
            chosen.push(candidate);
        }
    }
    let matrix = (0..currents.len()).map(|i| columns.iter().map(|c| c[i].clone()).collect()).collect();
    Ok(Pairing { forms: chosen, matrix, rank })
}

/// Brackets the generators, reads their simplicial classes back and pairs
/// the free ones with closed forms. Returns the generator matrices per degree.
pub fn check_current_generators(
    setup: &Setup,
    chains: &[Vec<LipschitzChain>],
    suite: &mut SuiteReport,
) -> Result<Vec<serde_json::Value>> {
    let n = setup.complex.ambient_dim();
    let mut out = Vec::new();
    let mut case = 0;
    for (k, gens) in chains.iter().enumerate() {
        let basis = setup.basis(k)?;
        let mut matrix: Vec<Vec<BigInt>> = Vec::new();
        let mut currents = Vec::new();
        for (i, c) in gens.iter().enumerate() {
            let t = bracket(c, n);
            suite.check("chain-map", case, t.boundary() == bracket(&c.boundary(), n), || json!({"degree": k, "generator": i}));
            let class = t.simplicial_coordinates(setup.complex).and_then(|full| basis.class_of(&setup.restrict(k, &full)));
            let ok = class.is_some();
            suite.check("carried", case, ok, || json!({"degree": k, "generator": i}));
            matrix.push(class.unwrap_or_else(|| vec![BigInt::zero(); basis.group.coordinate_count()]));
            currents.push(t);
            case += 1;
        }
        let identity = (0..gens.len()).all(|i| same_class(&basis, &matrix[i], &unit(basis.group.coordinate_count(), i)));
        suite.check("unimodular", k, identity, || json!({"degree": k, "matrix": int_rows(&matrix)}));
        let free = &currents[..basis.group.betti];
        let p = pairing(setup, k, free)?;
        out.push(json!({
            "degree": k,
            "group": basis.group.to_string(),
            "generator_matrix": int_rows(&matrix),
            "pairing": {
                "forms": p.forms.iter().map(FormSpec::describe).collect::<Vec<_>>(),
                "matrix": p.matrix.iter().map(|r| r.iter().map(q_text).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "rank": p.rank,
                "complete": p.rank == basis.group.betti,
            }
        }));
    }
    Ok(out)
}

pub fn int_rows(m: &[Vec<BigInt>]) -> Vec<Vec<String>> {
    m.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

pub fn run(space: &Space, pair: Option<&str>, theory: Theory) -> Result<Report> {
    let setup = Setup::new(space, pair)?;
    let groups = groups(&setup)?;
    let mut report = Report::new("homology");
    report.set("space", &space.name);
    report.set("pair", pair);
    report.set("theory", theory);
    let names: Vec<String> = groups.iter().map(|g| g.to_string()).collect();
    let label = match pair {
        Some(a) => format!("{} rel {a}", space.name),
        None => space.name.clone(),
    };
    report.text = names.iter().enumerate().map(|(k, g)| format!("H_{k}({label}) = {g}")).collect();
    let mut result = json!({ "groups": names });
    if theory != Theory::Singular {
        let mut suite = SuiteReport::new("lipschitz-generators");
        let chains = check_lipschitz_generators(&setup, &mut suite)?;
        report.suites.push(suite);
        if theory == Theory::Current {
            let mut suite = SuiteReport::new("current-generators");
            result["certificates"] = json!(check_current_generators(&setup, &chains, &mut suite)?);
            report.suites.push(suite);
        }
    }
    report.result = result;
    Ok(report)
}
