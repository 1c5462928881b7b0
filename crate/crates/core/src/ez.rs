//! Shuffle products on `Ω(R_•)`, the top homotopy operation, and executable
//! forms of the face-map identities for shuffles and of the two normalized
//! chain lemmas for `m(a,b)` and `q(a)`.
//!
//! Everything is over F₂, so the shuffle sign `(-1)^{ε(μ)}` with
//! `ε(μ) = Σ_i (μ_i − (i−1))` is always `+1` and is not evaluated.

use itertools::Itertools;
use rand::Rng;
use rand::SeedableRng;
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;

use crate::algebra::{monomial_basis, AlgebraElement};
use crate::closedform::lucas;
use crate::error::{Error, Result};
use crate::gf2::BitRow;
use crate::homology::ChainComplex;
use crate::report::CheckReport;
use crate::simplicial::{distinguished, Distinguished, ResolutionContext};

/// A `(p, q)`-shuffle: `mu ⊔ nu = {0, …, p+q−1}`, both increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Shuffle {
    pub mu: Vec<usize>,
    pub nu: Vec<usize>,
}

impl Shuffle {
    pub fn p(&self) -> usize {
        self.mu.len()
    }

    pub fn q(&self) -> usize {
        self.nu.len()
    }
}

/// All `C(p+q, p)` shuffles, lexicographic in `mu`.
pub fn enumerate_shuffles(p: usize, q: usize) -> Vec<Shuffle> {
    (0..p + q)
        .combinations(p)
        .map(|mu| {
            let nu = (0..p + q).filter(|k| !mu.contains(k)).collect();
            Shuffle { mu, nu }
        })
        .collect()
}

fn sum_par(
    level: usize,
    terms: impl ParallelIterator<Item = Result<AlgebraElement>>,
) -> Result<AlgebraElement> {
    terms
        .try_fold(
            || AlgebraElement::zero(level),
            |mut acc, t| {
                acc.add_assign(&t?);
                Ok(acc)
            },
        )
        .try_reduce(
            || AlgebraElement::zero(level),
            |mut a, b| {
                a.add_assign(&b);
                Ok(a)
            },
        )
}

/// `ρ(a ⊗ b) = Σ s_ν(a)·s_μ(b)` over `(p, q)`-shuffles, where `a` has level
/// `p`, `b` has level `q`, and `s_ν = s_{ν_q} ∘ … ∘ s_{ν_1}`.
pub fn shuffle_product(
    ctx: &ResolutionContext,
    a: &AlgebraElement,
    b: &AlgebraElement,
) -> Result<AlgebraElement> {
    let (p, q) = (a.level(), b.level());
    let shuffles = enumerate_shuffles(p, q);
    sum_par(
        p + q,
        shuffles.par_iter().map(|s| {
            let left = ctx.degeneracies(&s.nu, a)?;
            let right = ctx.degeneracies(&s.mu, b)?;
            Ok(left.mul_unchecked(&right))
        }),
    )
}

/// The top operation `δ_q(z) = Σ s_ν(z)·s_μ(z)` on a normalized cycle of
/// level `q ≥ 2`, summed over the `(q, q)`-shuffles with `μ_1 = 0`.
///
/// Each unordered pair `{μ, ν}` is counted once; the full shuffle sum is
/// `2·δ_q(z) = 0`.
pub fn delta_top(cx: &ChainComplex, z: &AlgebraElement) -> Result<AlgebraElement> {
    let q = z.level();
    if q < 2 {
        return Err(Error::usage(format!(
            "the top operation is defined from level 2 on, got level {q}"
        )));
    }
    if !cx.is_cycle(z)? {
        return Err(Error::usage(format!("{z} is not a cycle")));
    }
    let ctx = cx.context();
    let shuffles: Vec<Shuffle> = enumerate_shuffles(q, q)
        .into_iter()
        .filter(|s| s.mu[0] == 0)
        .collect();
    sum_par(
        2 * q,
        shuffles.par_iter().map(|s| {
            Ok(ctx
                .degeneracies(&s.nu, z)?
                .mul_unchecked(&ctx.degeneracies(&s.mu, z)?))
        }),
    )
}

fn same_level(a: &AlgebraElement, b: &AlgebraElement) -> Result<()> {
    if a.level() != b.level() {
        return Err(Error::usage(format!(
            "elements at levels {} and {} cannot be combined",
            a.level(),
            b.level()
        )));
    }
    Ok(())
}

/// `m(a, b) = s_0(a)s_1(b) + s_0(b)s_1(a)`.
pub fn m_form(
    ctx: &ResolutionContext,
    a: &AlgebraElement,
    b: &AlgebraElement,
) -> Result<AlgebraElement> {
    same_level(a, b)?;
    let mut out = ctx.degeneracy(0, a)?.mul_unchecked(&ctx.degeneracy(1, b)?);
    out.add_assign(&ctx.degeneracy(0, b)?.mul_unchecked(&ctx.degeneracy(1, a)?));
    Ok(out)
}

/// `q(a) = s_0(a)s_1(a)`.
pub fn q_form(ctx: &ResolutionContext, a: &AlgebraElement) -> Result<AlgebraElement> {
    Ok(ctx.degeneracy(0, a)?.mul_unchecked(&ctx.degeneracy(1, a)?))
}

/// `d_0` with the convention that it kills level 0.
fn d0_or_zero(ctx: &ResolutionContext, a: &AlgebraElement) -> Result<Option<AlgebraElement>> {
    if a.level() == 0 {
        Ok(None)
    } else {
        ctx.face(0, a).map(Some)
    }
}

fn killed_by_faces(
    ctx: &ResolutionContext,
    a: &AlgebraElement,
    faces: impl IntoIterator<Item = usize>,
) -> Result<bool> {
    for i in faces {
        if !ctx.face(i, a)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Face identities of the shuffle product:
/// `d_0 ρ(a⊗b) = ρ(d_0a ⊗ b) + ρ(a ⊗ d_0b)`, and for `1 ≤ i ≤ i_max`,
/// `d_i ρ(a⊗b) = 0` whenever `d_t a = d_t b = 0` for all `1 ≤ t ≤ i`
/// (faces beyond an element's level impose nothing).
pub fn ez_face_checks(
    ctx: &ResolutionContext,
    a: &AlgebraElement,
    b: &AlgebraElement,
    i_max: usize,
) -> Result<CheckReport> {
    let mut report = CheckReport::new("shuffle face identities");
    let (p, q) = (a.level(), b.level());
    let rho = shuffle_product(ctx, a, b)?;
    if p + q == 0 {
        report.skip();
    } else {
        let lhs = ctx.face(0, &rho)?;
        let mut rhs = AlgebraElement::zero(p + q - 1);
        if let Some(da) = d0_or_zero(ctx, a)? {
            rhs.add_assign(&shuffle_product(ctx, &da, b)?);
        }
        if let Some(db) = d0_or_zero(ctx, b)? {
            rhs.add_assign(&shuffle_product(ctx, a, &db)?);
        }
        report.expect(lhs == rhs, || {
            format!("d0 rho({a} | {b}) = {lhs}, expected {rhs}")
        });
    }
    for i in 1..=i_max.min(p + q) {
        let hyp = killed_by_faces(ctx, a, 1..=i.min(p))? && killed_by_faces(ctx, b, 1..=i.min(q))?;
        if !hyp {
            report.skip();
            continue;
        }
        let di = ctx.face(i, &rho)?;
        report.expect(di.is_zero(), || format!("d{i} rho({a} | {b}) = {di}"));
    }
    Ok(report)
}

/// Result of checking one conclusion of a lemma on concrete inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(String),
    /// The hypotheses did not hold for these inputs.
    Vacuous,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaOutcome {
    pub conclusions: Vec<(&'static str, Verdict)>,
}

impl LemmaOutcome {
    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.conclusions
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| v)
    }

    pub fn into_report(self, check: &str) -> CheckReport {
        let mut r = CheckReport::new(check);
        for (name, v) in self.conclusions {
            match v {
                Verdict::Pass => r.ok(),
                Verdict::Fail(msg) => r.fail(format!("{name}: {msg}")),
                Verdict::Vacuous => r.skip(),
            }
        }
        r
    }
}

fn verdict(cond: bool, msg: impl FnOnce() -> String) -> Verdict {
    if cond {
        Verdict::Pass
    } else {
        Verdict::Fail(msg())
    }
}

fn all_higher_faces_zero(ctx: &ResolutionContext, z: &AlgebraElement) -> Result<bool> {
    killed_by_faces(ctx, z, 1..=z.level())
}

/// The products lemma for `a, b ∈ N_ℓ`, `c` at level `ℓ−1`, and an optional
/// `x ∈ N_{ℓ+1}` used in place of `b = d_0(x)` for the boundary statement.
///
/// Conclusions: `normalized` (`s_1s_0(c)m(a,b) ∈ N`), `cycle` (when
/// `c·d_0a = c·d_0b = 0`), `boundary` (the explicit chain `y` has
/// `d_0y = s_1s_0(c)m(a, d_0x)` and no other faces).
pub fn lemma_products_check(
    ctx: &ResolutionContext,
    a: &AlgebraElement,
    b: &AlgebraElement,
    c: &AlgebraElement,
    x: Option<&AlgebraElement>,
) -> Result<LemmaOutcome> {
    let l = a.level();
    same_level(a, b)?;
    if l == 0 || c.level() + 1 != l {
        return Err(Error::usage(format!(
            "products lemma needs a, b at level l >= 1 and c at level l-1; got {l} and {}",
            c.level()
        )));
    }
    let mut out = Vec::new();
    let a_norm = all_higher_faces_zero(ctx, a)?;
    let b_norm = all_higher_faces_zero(ctx, b)?;
    let s10c = ctx.degeneracies(&[0, 1], c)?;
    let z = s10c.mul_unchecked(&m_form(ctx, a, b)?);
    let c_da_zero = c.mul_unchecked(&ctx.face(0, a)?).is_zero();
    let c_db_zero = c.mul_unchecked(&ctx.face(0, b)?).is_zero();
    if a_norm && b_norm {
        out.push((
            "normalized",
            verdict(all_higher_faces_zero(ctx, &z)?, || {
                format!("{z} has a nonzero higher face")
            }),
        ));
        if c_da_zero && c_db_zero {
            let d0z = ctx.face(0, &z)?;
            out.push(("cycle", verdict(d0z.is_zero(), || format!("d0 = {d0z}"))));
        } else {
            out.push(("cycle", Verdict::Vacuous));
        }
    } else {
        out.push(("normalized", Verdict::Vacuous));
        out.push(("cycle", Verdict::Vacuous));
    }
    let boundary = match x {
        Some(x) if a_norm && c_da_zero && x.level() == l + 1 && all_higher_faces_zero(ctx, x)? => {
            let bx = ctx.face(0, x)?;
            let target = s10c.mul_unchecked(&m_form(ctx, a, &bx)?);
            let s210c = ctx.degeneracies(&[0, 1, 2], c)?;
            let mut inner = ctx
                .degeneracies(&[1, 2], a)?
                .mul_unchecked(&ctx.degeneracy(0, x)?);
            inner.add_assign(
                &ctx.degeneracies(&[0, 2], a)?
                    .mul_unchecked(&ctx.degeneracy(1, x)?),
            );
            inner.add_assign(
                &ctx.degeneracies(&[0, 1], a)?
                    .mul_unchecked(&ctx.degeneracy(2, x)?),
            );
            let y = s210c.mul_unchecked(&inner);
            let d0y = ctx.face(0, &y)?;
            let ok = d0y == target && all_higher_faces_zero(ctx, &y)?;
            verdict(ok, || {
                format!("bounding chain {y} has d0 = {d0y}, expected {target}")
            })
        }
        _ => Verdict::Vacuous,
    };
    out.push(("boundary", boundary));
    Ok(LemmaOutcome { conclusions: out })
}

/// The squares lemma for `a ∈ N_ℓ`, `c` at level `ℓ`, and an optional
/// `b ∈ N_{ℓ+1}`.
///
/// Conclusions: `normalized` (`s_0(c)q(a) ∈ N` when `c·a² = 0`), `cycle`
/// (additionally `c·a·s_0d_0a = 0`), `boundary` (when `s_0(c)b² = 0`, the
/// chain `s_1s_0(c)s_1(b)s_2(b)` has `d_0 = s_0(c)q(d_0b)` and no other faces).
pub fn lemma_squares_check(
    ctx: &ResolutionContext,
    a: &AlgebraElement,
    c: &AlgebraElement,
    b: Option<&AlgebraElement>,
) -> Result<LemmaOutcome> {
    let l = a.level();
    same_level(a, c)?;
    let mut out = Vec::new();
    let y = ctx.degeneracy(0, c)?.mul_unchecked(&q_form(ctx, a)?);
    let a_norm = all_higher_faces_zero(ctx, a)?;
    let c_a2_zero = c.mul_unchecked(&a.mul_unchecked(a)).is_zero();
    if a_norm && c_a2_zero {
        out.push((
            "normalized",
            verdict(all_higher_faces_zero(ctx, &y)?, || {
                format!("{y} has a nonzero higher face")
            }),
        ));
        let s0d0a = match d0_or_zero(ctx, a)? {
            Some(d) => ctx.degeneracy(0, &d)?,
            None => AlgebraElement::zero(l),
        };
        if c.mul_unchecked(a).mul_unchecked(&s0d0a).is_zero() {
            let d0y = ctx.face(0, &y)?;
            out.push(("cycle", verdict(d0y.is_zero(), || format!("d0 = {d0y}"))));
        } else {
            out.push(("cycle", Verdict::Vacuous));
        }
    } else {
        out.push(("normalized", Verdict::Vacuous));
        out.push(("cycle", Verdict::Vacuous));
    }
    let boundary = match b {
        Some(b) if b.level() == l + 1 && all_higher_faces_zero(ctx, b)? => {
            let s0c = ctx.degeneracy(0, c)?;
            if s0c.mul_unchecked(&b.mul_unchecked(b)).is_zero() {
                let w = ctx
                    .degeneracies(&[0, 1], c)?
                    .mul_unchecked(&ctx.degeneracy(1, b)?)
                    .mul_unchecked(&ctx.degeneracy(2, b)?);
                let target = s0c.mul_unchecked(&q_form(ctx, &ctx.face(0, b)?)?);
                let d0w = ctx.face(0, &w)?;
                let ok = d0w == target && all_higher_faces_zero(ctx, &w)?;
                verdict(ok, || {
                    format!("chain {w} has d0 = {d0w}, expected {target}")
                })
            } else {
                Verdict::Vacuous
            }
        }
        _ => Verdict::Vacuous,
    };
    out.push(("boundary", boundary));
    Ok(LemmaOutcome { conclusions: out })
}

/// Seeded random elements of a chain complex.
pub struct ElementSampler<'a> {
    cx: &'a ChainComplex,
    rng: SplitMix64,
    max_t: u32,
}

impl<'a> ElementSampler<'a> {
    pub fn new(cx: &'a ChainComplex, seed: u64, max_t: u32) -> Self {
        Self {
            cx,
            rng: SplitMix64::seed_from_u64(seed),
            max_t,
        }
    }

    fn combination(&mut self, q: usize, t: u32, vectors: &[BitRow]) -> AlgebraElement {
        let coords = self.cx.coordinates(q, t);
        let mut v = BitRow::zeros(coords.dim());
        for b in vectors {
            if self.rng.gen_bool(0.5) {
                v.xor_assign(b);
            }
        }
        coords.to_element(&v)
    }

    /// A random element of the subspace chosen by `pick`, in a random degree
    /// where that subspace is nonzero; zero if none is found.
    fn sample(
        &mut self,
        q: usize,
        pick: impl Fn(&ChainComplex, usize, u32) -> Result<Vec<BitRow>>,
    ) -> Result<AlgebraElement> {
        for _ in 0..16 {
            let t = self.rng.gen_range(0..=self.max_t);
            let vectors = pick(self.cx, q, t)?;
            if vectors.is_empty() {
                continue;
            }
            let e = self.combination(q, t, &vectors);
            if !e.is_zero() {
                return Ok(e);
            }
        }
        Ok(AlgebraElement::zero(q))
    }

    pub fn normalized(&mut self, q: usize) -> Result<AlgebraElement> {
        self.sample(q, |cx, q, t| {
            Ok(cx.slice(q, t)?.normalized.basis().to_vec())
        })
    }

    pub fn cycle(&mut self, q: usize) -> Result<AlgebraElement> {
        self.sample(q, |cx, q, t| Ok(cx.slice(q, t)?.cycles.basis().to_vec()))
    }

    /// A random sum of monomials, not necessarily normalized.
    pub fn any(&mut self, q: usize) -> Result<AlgebraElement> {
        self.sample(q, |cx, q, t| {
            let n = monomial_basis(q, cx.grading(), t, cx.kind()).len();
            Ok((0..n).map(|k| BitRow::unit(n, k)).collect())
        })
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn level(&mut self, max: usize) -> usize {
        self.rng.gen_range(0..=max)
    }
}

/// Settings for [`run_trials`].
#[derive(Clone, Copy, Debug)]
pub struct TrialConfig {
    pub trials: usize,
    pub seed: u64,
    /// Largest level of a random factor.
    pub max_level: usize,
    /// Largest internal degree of a random factor.
    pub max_t: u32,
}

/// Random instances of the shuffle face identities, both lemmas, and
/// homology-commutativity of the shuffle product.
pub fn run_trials(cx: &ChainComplex, cfg: TrialConfig) -> Result<Vec<CheckReport>> {
    let ctx = cx.context();
    let mut s = ElementSampler::new(cx, cfg.seed, cfg.max_t);
    let mut faces = CheckReport::new("shuffle face identities (random)");
    let mut products = CheckReport::new("products lemma (random)");
    let mut squares = CheckReport::new("squares lemma (random)");
    let mut commutes = CheckReport::new("shuffle product commutes in homology (random)");
    let lemma_level = cfg.max_level.clamp(1, 2);
    for _ in 0..cfg.trials {
        let (p, q) = (s.level(cfg.max_level), s.level(cfg.max_level));
        let pick = |s: &mut ElementSampler, q| {
            if s.coin(0.5) {
                s.normalized(q)
            } else {
                s.any(q)
            }
        };
        let a = pick(&mut s, p)?;
        let b = pick(&mut s, q)?;
        faces.merge(ez_face_checks(ctx, &a, &b, p + q)?);

        let l = 1 + s.level(lemma_level - 1);
        let a = if s.coin(0.5) {
            s.cycle(l)?
        } else {
            s.normalized(l)?
        };
        let b = if s.coin(0.5) {
            s.cycle(l)?
        } else {
            s.normalized(l)?
        };
        let c = if s.coin(0.3) {
            AlgebraElement::one(l - 1)
        } else {
            s.any(l - 1)?
        };
        let x = s.normalized(l + 1)?;
        products.merge(lemma_products_check(ctx, &a, &b, &c, Some(&x))?.into_report("products"));

        let c = if s.coin(0.3) {
            AlgebraElement::one(l)
        } else {
            s.any(l)?
        };
        let bb = s.normalized(l + 1)?;
        squares.merge(lemma_squares_check(ctx, &a, &c, Some(&bb))?.into_report("squares"));

        let cap = cfg.max_level.min(2);
        let p = s.level(cap);
        let q = s.level(cap - p);
        let (a, b) = (s.cycle(p)?, s.cycle(q)?);
        let mut sum = shuffle_product(ctx, &a, &b)?;
        sum.add_assign(&shuffle_product(ctx, &b, &a)?);
        match cx.is_boundary(&sum) {
            Ok(true) => commutes.ok(),
            Ok(false) => {
                commutes.fail(format!("rho({a} | {b}) + rho({b} | {a}) is not a boundary"))
            }
            Err(e) => commutes.fail(format!("rho({a} | {b}) + rho({b} | {a}): {e}")),
        }
    }
    Ok(vec![faces, products, squares, commutes])
}

/// The product and top-operation relations of the closed-form answer, checked
/// on the distinguished cycles in homology for `p + q ≤ max_total` and for
/// `δ_q` with `2q ≤ max_total`.
pub fn structure_checks(cx: &ChainComplex, max_total: usize) -> Result<CheckReport> {
    let ctx = cx.context();
    let g = *cx.grading();
    let mut report = CheckReport::new(format!(
        "product and operation relations for n={}, m={}",
        g.n, g.m
    ));
    let mut homologous = |lhs: AlgebraElement, rhs: AlgebraElement, label: String| {
        let mut diff = lhs;
        diff.add_assign(&rhs);
        match cx.is_boundary(&diff) {
            Ok(true) => report.ok(),
            Ok(false) => report.fail(format!("{label}: difference is not a boundary")),
            Err(e) => report.fail(format!("{label}: {e}")),
        }
    };
    let scale = |c: bool, e: AlgebraElement| {
        if c {
            e
        } else {
            AlgebraElement::zero(e.level())
        }
    };
    let x_times = |e: &AlgebraElement| -> Result<AlgebraElement> {
        AlgebraElement::parse(e.level(), "x")?.mul(e)
    };
    for p in 0..=max_total {
        for q in 0..=max_total - p {
            let c = lucas((p + q) as u64, p as u64);
            if g.is_n_odd() {
                let w = |k| distinguished(Distinguished::Omega, k);
                let lhs = shuffle_product(ctx, &w(p)?, &w(q)?)?;
                homologous(lhs, scale(c, w(p + q)?), format!("omega_{p} omega_{q}"));
            } else {
                let a = |k| distinguished(Distinguished::Alpha, k);
                let b = |k| distinguished(Distinguished::Beta, k);
                let aa = shuffle_product(ctx, &a(p)?, &a(q)?)?;
                homologous(aa, AlgebraElement::zero(p + q), format!("a_{p} a_{q}"));
                let bb = shuffle_product(ctx, &b(p)?, &b(q)?)?;
                homologous(bb, scale(c, x_times(&b(p + q)?)?), format!("b_{p} b_{q}"));
                let ab = shuffle_product(ctx, &a(p)?, &b(q)?)?;
                homologous(ab, scale(c, x_times(&a(p + q)?)?), format!("a_{p} b_{q}"));
            }
        }
    }
    for q in 2..=max_total / 2 {
        let c = lucas((2 * q - 1) as u64, q as u64);
        if g.is_n_odd() {
            let w = distinguished(Distinguished::Omega, q)?;
            let d = delta_top(cx, &w)?;
            homologous(
                d,
                scale(c, distinguished(Distinguished::Omega, 2 * q)?),
                format!("delta_{q} omega_{q}"),
            );
        } else {
            let a = distinguished(Distinguished::Alpha, q)?;
            homologous(
                delta_top(cx, &a)?,
                AlgebraElement::zero(2 * q),
                format!("delta_{q} a_{q}"),
            );
            let b = distinguished(Distinguished::Beta, q)?;
            let expect = scale(c, x_times(&distinguished(Distinguished::Beta, 2 * q)?)?);
            homologous(delta_top(cx, &b)?, expect, format!("delta_{q} b_{q}"));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ChainKind, GradingSpec};

    fn ctx(n: u32, m: u32) -> ResolutionContext {
        ResolutionContext::new(GradingSpec::new(n, m).unwrap(), 6)
    }

    fn cx(n: u32, m: u32) -> ChainComplex {
        ChainComplex::new(ctx(n, m), ChainKind::DeRham)
    }

    fn el(level: usize, s: &str) -> AlgebraElement {
        AlgebraElement::parse(level, s).unwrap()
    }

    fn omega(q: usize) -> AlgebraElement {
        distinguished(Distinguished::Omega, q).unwrap()
    }

    #[test]
    fn shuffle_counts_and_partition() {
        assert_eq!(enumerate_shuffles(1, 1).len(), 2);
        assert_eq!(enumerate_shuffles(2, 2).len(), 6);
        let s = enumerate_shuffles(3, 2);
        assert_eq!(s.len(), 10);
        for sh in &s {
            let mut all: Vec<usize> = sh.mu.iter().chain(&sh.nu).copied().collect();
            all.sort();
            assert_eq!(all, (0..5).collect::<Vec<_>>());
            assert!(sh.mu.windows(2).all(|w| w[0] < w[1]));
            assert!(sh.nu.windows(2).all(|w| w[0] < w[1]));
        }
        assert!(s.windows(2).all(|w| w[0].mu < w[1].mu));
        assert_eq!(
            enumerate_shuffles(0, 0),
            vec![Shuffle {
                mu: vec![],
                nu: vec![]
            }]
        );
    }

    #[test]
    fn omega_products() {
        let c = ctx(1, 2);
        assert!(shuffle_product(&c, &omega(1), &omega(1)).unwrap().is_zero());
        assert_eq!(shuffle_product(&c, &omega(1), &omega(2)).unwrap(), omega(3));
    }

    #[test]
    fn unit_and_degree() {
        let c = ctx(2, 2);
        let b = el(2, "x*dy1*y2 + x*y1*dy2");
        assert_eq!(shuffle_product(&c, &AlgebraElement::one(0), &b).unwrap(), b);
        let a = el(1, "x");
        let r = shuffle_product(&c, &a, &b).unwrap();
        assert!(!r.is_zero());
        let g = c.grading();
        assert_eq!(
            r.internal_degree(g).pure().unwrap(),
            a.internal_degree(g).pure().unwrap() + b.internal_degree(g).pure().unwrap()
        );
    }

    #[test]
    fn delta_examples() {
        let odd = cx(1, 2);
        assert_eq!(delta_top(&odd, &omega(2)).unwrap(), omega(4));
        let even = cx(2, 2);
        let beta = distinguished(Distinguished::Beta, 2).unwrap();
        let d = delta_top(&even, &beta).unwrap();
        let mut diff = AlgebraElement::parse(4, "x")
            .unwrap()
            .mul(&distinguished(Distinguished::Beta, 4).unwrap())
            .unwrap();
        diff.add_assign(&d);
        assert!(even.is_boundary(&diff).unwrap());
        let alpha = distinguished(Distinguished::Alpha, 2).unwrap();
        assert!(delta_top(&even, &alpha).unwrap().is_zero());
        assert!(delta_top(&odd, &omega(1)).is_err());
        assert!(delta_top(&odd, &el(2, "y1*dy2")).is_err());
    }

    #[test]
    fn delta_is_normalized() {
        let c = cx(1, 2);
        let z = omega(2);
        assert!(c.is_normalized(&delta_top(&c, &z).unwrap()).unwrap());
    }

    #[test]
    fn forms() {
        let c = ctx(2, 2);
        let a = el(1, "x*dy1 + y1");
        let b = el(1, "dx*dy1");
        assert!(m_form(&c, &a, &a).unwrap().is_zero());
        let mut rhs = q_form(&c, &a).unwrap();
        rhs.add_assign(&q_form(&c, &b).unwrap());
        rhs.add_assign(&m_form(&c, &a, &b).unwrap());
        assert_eq!(q_form(&c, &a.add(&b).unwrap()).unwrap(), rhs);
        assert_eq!(
            m_form(&c, &el(1, "dy1"), &el(1, "x*dx")).unwrap(),
            el(2, "x*dx*dy2 + x*dx*dy1")
        );
        assert!(m_form(&c, &el(1, "x"), &el(2, "x")).is_err());
    }

    #[test]
    fn face_checks_on_omega() {
        let c = ctx(1, 2);
        let r = ez_face_checks(&c, &omega(1), &omega(1), 2).unwrap();
        assert!(r.pass, "{:?}", r.failures);
        assert_eq!(r.checked, 3);
    }

    #[test]
    fn lemma_examples() {
        let c = ctx(2, 2);
        let beta = distinguished(Distinguished::Beta, 1).unwrap();
        let one = AlgebraElement::one(0);
        let out = lemma_products_check(&c, &beta, &beta, &one, None).unwrap();
        assert_eq!(out.verdict("cycle"), Some(&Verdict::Pass));
        assert_eq!(out.verdict("boundary"), Some(&Verdict::Vacuous));
        let alpha = distinguished(Distinguished::Alpha, 1).unwrap();
        let x = distinguished(Distinguished::Beta, 2).unwrap();
        let out = lemma_products_check(&c, &alpha, &el(1, "0"), &one, Some(&x)).unwrap();
        assert_eq!(out.verdict("boundary"), Some(&Verdict::Pass));
        let out = lemma_squares_check(&c, &beta, &AlgebraElement::one(1), None).unwrap();
        assert_eq!(out.verdict("cycle"), Some(&Verdict::Pass));
        let non_normal = el(1, "x*dx");
        let out = lemma_squares_check(&c, &non_normal, &AlgebraElement::one(1), None).unwrap();
        assert_eq!(out.verdict("normalized"), Some(&Verdict::Vacuous));
    }

    #[test]
    fn random_trials_pass() {
        for (n, m) in [(1, 2), (2, 2)] {
            let c = cx(n, m);
            let cfg = TrialConfig {
                trials: 25,
                seed: 11,
                max_level: 2,
                max_t: 2 * (n + 1) * m,
            };
            for r in run_trials(&c, cfg).unwrap() {
                assert!(r.pass, "{}: {:?}", r.check, r.failures);
                assert!(r.checked > 0, "{}", r.check);
            }
        }
    }

    #[test]
    fn relations_in_homology() {
        for (n, m) in [(1, 2), (2, 2)] {
            let r = structure_checks(&cx(n, m), 3).unwrap();
            assert!(r.pass, "{:?}", r.failures);
        }
    }
}
