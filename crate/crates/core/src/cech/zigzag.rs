//! Staircase descent in the augmented double complex and the two climbs that
//! prove the bracket is onto and one-to-one on homology.
use super::{eps_preimage, fill_locally, solve_phi, Apex, CechChain, Coefficient, Preference};
use crate::arith::q;
use crate::bracket::{bracket, bracket_inverse_deg0};
use crate::chains::LipschitzChain;
use crate::complex::{BallCover, MetricComplex};
use crate::currents::PolyhedralCurrent;
use crate::{Error, Result};
use alloc::string::String;
use alloc::vec::Vec;

/// Covers ordered from finest to coarsest; `maps[k]` projects the balls of
/// `covers[k]` into `covers[k + 1]`.
#[derive(Clone, Debug)]
pub struct Ladder {
    pub covers: Vec<BallCover>,
    pub maps: Vec<Vec<usize>>,
}

impl Ladder {
    /// Checks every projection by the exact ball-inclusion certificate.
    pub fn new(covers: Vec<BallCover>, maps: Vec<Vec<usize>>) -> Result<Self> {
        if covers.is_empty() || maps.len() + 1 != covers.len() {
            return Err(Error::Precondition("a ladder needs one map between consecutive covers".into()));
        }
        for (k, lam) in maps.iter().enumerate() {
            let (fine, coarse) = (&covers[k], &covers[k + 1]);
            if lam.len() != fine.len() {
                return Err(Error::Precondition("projection length differs from the cover size".into()));
            }
            for (i, &j) in lam.iter().enumerate() {
                if j >= coarse.len() || !fine.balls[i].inside(&coarse.balls[j]) {
                    return Err(Error::Refinement(i));
                }
            }
        }
        Ok(Ladder { covers, maps })
    }

    /// `steps` halvings of the coarsest cover; the result has `steps + 1` covers.
    pub fn build(complex: &MetricComplex, coarsest: &BallCover, steps: usize, depth: usize) -> Result<Self> {
        let mut covers = alloc::vec![coarsest.clone()];
        let mut maps = Vec::new();
        for _ in 0..steps {
            let (fine, lam) = covers[covers.len() - 1].refine(complex, &q(1, 2), depth)?;
            covers.push(fine);
            maps.push(lam);
        }
        covers.reverse();
        maps.reverse();
        Ladder::new(covers, maps)
    }

    pub fn len(&self) -> usize {
        self.covers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.covers.is_empty()
    }

    /// Projection from `covers[from]` to `covers[to]`.
    pub fn composite(&self, from: usize, to: usize) -> Vec<usize> {
        let mut lam: Vec<usize> = (0..self.covers[from].len()).collect();
        for m in &self.maps[from..to] {
            lam = compose(&lam, m);
        }
        lam
    }
}

fn compose(first: &[usize], then: &[usize]) -> Vec<usize> {
    first.iter().map(|&i| then[i]).collect()
}

/// One entry of a zig-zag transcript.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub stage: String,
    pub p: usize,
    pub q: usize,
    /// Index of the ladder cover the object lives on.
    pub cover: usize,
    pub components: usize,
}

fn step<A: Coefficient>(stage: &str, cover: usize, x: &CechChain<A>) -> Step {
    Step { stage: stage.into(), p: x.degree(), q: x.coeff_degree(), cover, components: x.len() }
}

/// `rows[k]` is the Čech k-chain with coefficients of degree m − k.
#[derive(Clone, Debug)]
pub struct Staircase<A> {
    pub rows: Vec<CechChain<A>>,
    pub steps: Vec<Step>,
}

/// Descends a cycle of degree m: ε rows[0] = x (up to subdivision for
/// chains) and Φ rows[k] = vertical(rows[k − 1]). The result is checked to
/// give a cycle of the total complex.
pub fn zigzag_descend<A: Coefficient>(x: &A, ambient_dim: usize, cover: &BallCover, budget: usize) -> Result<Staircase<A>> {
    let m = x.degree();
    if m > 0 && !x.vertical().is_zero() {
        return Err(Error::Precondition("descent of a non-cycle".into()));
    }
    let first = eps_preimage(x, ambient_dim, cover, Preference::First, budget)
        .map_err(|e| Error::Lift { p: 0, q: m, reason: alloc::format!("{e}") })?;
    let mut steps = alloc::vec![step("eps-preimage", 0, &first)];
    let mut rows = alloc::vec![first];
    for k in 1..=m {
        let next = solve_phi(&rows[k - 1].vertical(), cover, Apex::Min)?;
        steps.push(step("phi-preimage", 0, &next));
        rows.push(next);
    }
    if !check_total_cycle(&rows) {
        return Err(Error::Lift { p: m, q: 0, reason: "staircase is not a total cycle".into() });
    }
    Ok(Staircase { rows, steps })
}

/// Δ(Σ s_k rows[k]) = 0 for Δ = Φ + (−1)ᵖ·vertical on bidegree (p, q) and
/// s_k = (−1)^{k(k+1)/2}.
pub fn check_total_cycle<A: Coefficient>(rows: &[CechChain<A>]) -> bool {
    let twist = |k: usize| if (k * (k + 1) / 2).is_multiple_of(2) { 1 } else { -1 };
    (1..rows.len()).all(|k| {
        let vertical_sign = if (k - 1) % 2 == 0 { 1 } else { -1 };
        rows[k].phi().scale(twist(k)).add(&rows[k - 1].vertical().scale(vertical_sign * twist(k - 1))).is_zero()
    })
}

/// Witness that a current cycle T is homologous to the bracket of a chain
/// cycle: ∂S = [chain] − T.
#[derive(Clone, Debug)]
pub struct FillWitness {
    pub chain: LipschitzChain,
    pub current: PolyhedralCurrent,
    pub steps: Vec<Step>,
}

/// Finds a chain cycle c and a current S with ∂S = [c] − T.
///
/// T is descended on the finest cover and its bottom row converted to
/// 0-chains. Each stage of the climb uses two projections λ then μ: a chain
/// filling b c′ = λΦc on the next cover, then a current filling
/// ∂S′ = μ([c′] − ν̃T_row − λΦS) on the one after, so 2m + 1 covers are used.
pub fn zigzag_fill(t: &PolyhedralCurrent, complex: &MetricComplex, ladder: &Ladder, budget: usize) -> Result<FillWitness> {
    let (m, n) = (t.degree(), t.ambient_dim());
    if !t.is_cycle() {
        return Err(Error::Precondition("fill of a current with nonzero boundary".into()));
    }
    if m == 0 || t.is_zero() {
        let chain = if m == 0 { bracket_inverse_deg0(t)? } else { LipschitzChain::zero(m) };
        return Ok(FillWitness { chain, current: PolyhedralCurrent::zero(m + 1, n), steps: Vec::new() });
    }
    if ladder.len() < 2 * m + 1 {
        return Err(Error::Precondition(alloc::format!("degree {m} needs {} covers in the ladder", 2 * m + 1)));
    }
    let stairs = zigzag_descend(t, n, &ladder.covers[0], budget)?;
    let mut steps = stairs.steps;
    let rows = stairs.rows;
    let mut c = rows[m].bracket_inverse()?;
    let mut s: CechChain<PolyhedralCurrent> = CechChain::zero(m, 1, n);
    for k in 0..m {
        let (here, mid) = (2 * k, 2 * k + 1);
        let (lam, mu) = (&ladder.maps[here], &ladder.maps[mid]);
        let c_next = fill_locally(&c.phi(), complex, &ladder.covers[here], lam, &ladder.covers[mid])?;
        steps.push(step("chain-fill", mid, &c_next));
        let e = c_next.bracket().sub(&rows[m - k - 1].push(&ladder.composite(0, mid))).sub(&s.phi().push(lam));
        if !e.vertical().is_zero() {
            return Err(Error::Lift { p: m - k - 1, q: k + 1, reason: "current defect is not a cycle".into() });
        }
        s = fill_locally(&e, complex, &ladder.covers[mid], mu, &ladder.covers[mid + 1])?;
        steps.push(step("current-fill", mid + 1, &s));
        c = c_next.push(mu);
    }
    let chain = c.augment()?;
    let current = s.augment()?;
    if current.boundary() != bracket(&chain, n).sub(t) {
        return Err(Error::Lift { p: 0, q: m + 1, reason: "∂S differs from [c] − T".into() });
    }
    Ok(FillWitness { chain, current, steps })
}

/// Given a chain cycle c and a current T with ∂T = [c], finds c′ with b c′ = c.
///
/// c is descended on the finest cover (subdividing it j times), T is descended
/// against the staircase of c, the bottom row is converted to 0-chains and the
/// chain climb gives c′₀ with b c′₀ = sd^j c. The subdivision homotopy D
/// corrects this to b(c′₀ + Σ_{i<j} D sd^i c) = c.
pub fn zigzag_cancel(
    c: &LipschitzChain,
    t: &PolyhedralCurrent,
    complex: &MetricComplex,
    ladder: &Ladder,
    budget: usize,
) -> Result<(LipschitzChain, Vec<Step>)> {
    let (m, n) = (c.degree(), t.ambient_dim());
    if !c.is_cycle() {
        return Err(Error::Precondition("cancel of a non-cycle".into()));
    }
    if t.degree() != m + 1 || t.boundary() != bracket(c, n) {
        return Err(Error::Precondition("the current does not bound the bracket of the chain".into()));
    }
    if c.is_zero() {
        return Ok((LipschitzChain::zero(m + 1), Vec::new()));
    }
    if ladder.len() < m + 2 {
        return Err(Error::Precondition(alloc::format!("degree {m} needs {} covers in the ladder", m + 2)));
    }
    let cover0 = &ladder.covers[0];
    let stairs = zigzag_descend(c, n, cover0, budget)?;
    let mut steps = stairs.steps;
    let rows = stairs.rows;
    let times = rows[0].augment()?.level() - c.level();
    let mut tk = eps_preimage(t, n, cover0, Preference::First, budget)?;
    steps.push(step("current-eps-preimage", 0, &tk));
    for k in 1..=m + 1 {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let rhs = tk.vertical().add(&rows[k - 1].bracket().scale(sign));
        tk = solve_phi(&rhs, cover0, Apex::Min)?;
        steps.push(step("current-phi-preimage", 0, &tk));
    }
    let bottom = tk.bracket_inverse()?;
    let sign = |j: usize| if j.is_multiple_of(2) { 1 } else { -1 };
    let mut r = bottom.phi().add(&rows[m].scale(sign(m)));
    let mut d = CechChain::zero(0, m + 1, n);
    for k in 0..=m {
        let lam = ladder.composite(0, k + 1);
        d = fill_locally(&r, complex, &ladder.covers[k], &ladder.maps[k], &ladder.covers[k + 1])?;
        steps.push(step("chain-fill", k + 1, &d));
        if k < m {
            r = d.phi().add(&rows[m - k - 1].push(&lam).scale(sign(m - k - 1)));
        }
    }
    let mut lift = d.augment()?;
    let mut sub = c.clone();
    for _ in 0..times {
        lift = lift.add(&sub.subdivision_homotopy());
        sub = sub.subdivide();
    }
    if !Coefficient::same(&lift.boundary(), c) {
        return Err(Error::Lift { p: 0, q: m + 1, reason: "b c′ differs from c".into() });
    }
    Ok((lift, steps))
}
