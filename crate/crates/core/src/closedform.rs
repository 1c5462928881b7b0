//! The closed-form answers: the bigraded algebra `H_*(F₂[x]/(x^{n+1}); Ω)`
//! with its top operations, and `H*(ΛX)` as a module over the Steenrod
//! algebra for `X` with truncated polynomial cohomology.

use std::collections::HashMap;
use std::fmt;

use crate::algebra::{AlgebraElement, GradingSpec};
use crate::error::{Error, Result};
use crate::simplicial::{distinguished, Distinguished};
use crate::steenrod::{ClassSpec, FiniteAModule};
use crate::thom::{SpaceDescriptor, SpaceKind};

/// `C(a, b) mod 2`: set iff every binary digit of `b` is at most that of `a`.
pub fn lucas(a: u64, b: u64) -> bool {
    b <= a && b & !a == 0
}

/// A basis class of the closed-form answer.
///
/// For `n` odd the basis is `x^j dx^ε γ_q` with `0 ≤ j ≤ n`; for `n` even it
/// is `1` together with `x^j a_q`, `x^j b_q` for `0 ≤ j ≤ n−1`, where
/// `b_0 = x` and `a_0 = dx`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Main1Label {
    Gamma { x: u32, dx: bool, q: usize },
    Unit,
    A { x: u32, q: usize },
    B { x: u32, q: usize },
}

impl Main1Label {
    pub fn level(&self) -> usize {
        match *self {
            Main1Label::Gamma { q, .. } | Main1Label::A { q, .. } | Main1Label::B { q, .. } => q,
            Main1Label::Unit => 0,
        }
    }
}

fn x_power(j: u32) -> Option<String> {
    match j {
        0 => None,
        1 => Some("x".into()),
        _ => Some(format!("x^{j}")),
    }
}

impl fmt::Display for Main1Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors: Vec<String> = match *self {
            Main1Label::Unit => vec![],
            Main1Label::Gamma { x, dx, q } => x_power(x)
                .into_iter()
                .chain(dx.then(|| "dx".to_string()))
                .chain((q > 0).then(|| format!("g{q}")))
                .collect(),
            Main1Label::A { x, q } => x_power(x).into_iter().chain([format!("a{q}")]).collect(),
            Main1Label::B { x, q } => x_power(x).into_iter().chain([format!("b{q}")]).collect(),
        };
        if factors.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&factors.join("*"))
        }
    }
}

/// The presentation of `H_*(F₂[x]/(x^{n+1}); Ω)` for one grading.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Main1Presentation {
    pub grading: GradingSpec,
}

impl Main1Presentation {
    pub fn new(grading: GradingSpec) -> Self {
        Self { grading }
    }

    fn n(&self) -> u32 {
        self.grading.n
    }

    /// Every basis label at level `q`.
    pub fn labels(&self, q: usize) -> Vec<Main1Label> {
        let n = self.n();
        if self.grading.is_n_odd() {
            (0..=n)
                .flat_map(|x| [false, true].map(|dx| Main1Label::Gamma { x, dx, q }))
                .collect()
        } else {
            let mut out = Vec::new();
            if q == 0 {
                out.push(Main1Label::Unit);
            }
            for x in 0..n {
                out.push(Main1Label::A { x, q });
                out.push(Main1Label::B { x, q });
            }
            out
        }
    }

    fn valid(&self, l: &Main1Label) -> bool {
        let n = self.n();
        match *l {
            Main1Label::Gamma { x, .. } => self.grading.is_n_odd() && x <= n,
            Main1Label::Unit => !self.grading.is_n_odd(),
            Main1Label::A { x, .. } | Main1Label::B { x, .. } => !self.grading.is_n_odd() && x < n,
        }
    }

    fn check(&self, l: &Main1Label) -> Result<()> {
        if self.valid(l) {
            Ok(())
        } else {
            Err(Error::usage(format!(
                "{l} is not a basis label for n={}",
                self.n()
            )))
        }
    }

    /// Internal degree of the representing cycle.
    pub fn internal_degree(&self, l: &Main1Label) -> u32 {
        let g = &self.grading;
        let per_level = g.dy_degree();
        match *l {
            Main1Label::Unit => 0,
            Main1Label::Gamma { x, dx, q } => {
                x * g.m + u32::from(dx) * g.dx_degree() + q as u32 * per_level
            }
            Main1Label::A { x, q } => x * g.m + g.dx_degree() + q as u32 * per_level,
            Main1Label::B { x, q } => x * g.m + g.m + q as u32 * per_level,
        }
    }

    /// Degree in the loop-space cohomology.
    pub fn total_degree(&self, l: &Main1Label) -> u32 {
        self.internal_degree(l) - l.level() as u32
    }

    pub fn dims(&self, q: usize, t: u32) -> usize {
        self.labels(q)
            .iter()
            .filter(|l| self.internal_degree(l) == t)
            .count()
    }

    /// The distinguished cycle representing a label.
    pub fn representative(&self, l: &Main1Label) -> Result<AlgebraElement> {
        self.check(l)?;
        let q = l.level();
        let x_pow = |j: u32| AlgebraElement::parse(q, &format!("x^{j}"));
        Ok(match *l {
            Main1Label::Unit => AlgebraElement::one(0),
            Main1Label::Gamma { x, dx, q } => {
                let base = if dx {
                    distinguished(Distinguished::Alpha, q)?
                } else {
                    distinguished(Distinguished::Omega, q)?
                };
                x_pow(x)?.mul(&base)?
            }
            Main1Label::A { x, q } => x_pow(x)?.mul(&distinguished(Distinguished::Alpha, q)?)?,
            Main1Label::B { x, q } => x_pow(x)?.mul(&distinguished(Distinguished::Beta, q)?)?,
        })
    }

    /// Product of two basis labels; `None` is zero.
    pub fn product(&self, a: &Main1Label, b: &Main1Label) -> Result<Option<Main1Label>> {
        self.check(a)?;
        self.check(b)?;
        let n = self.n();
        let c = |p: usize, q: usize| lucas((p + q) as u64, p as u64);
        Ok(match (*a, *b) {
            (Main1Label::Unit, other) | (other, Main1Label::Unit) => Some(other),
            (Main1Label::Gamma { x: s, dx: e, q: p }, Main1Label::Gamma { x: t, dx: f, q }) => {
                (s + t <= n && !(e && f) && c(p, q)).then_some(Main1Label::Gamma {
                    x: s + t,
                    dx: e || f,
                    q: p + q,
                })
            }
            (Main1Label::A { .. }, Main1Label::A { .. }) => None,
            (Main1Label::A { x: s, q: p }, Main1Label::B { x: t, q })
            | (Main1Label::B { x: t, q }, Main1Label::A { x: s, q: p }) => {
                (s + t + 1 < n && c(p, q)).then_some(Main1Label::A {
                    x: s + t + 1,
                    q: p + q,
                })
            }
            (Main1Label::B { x: s, q: p }, Main1Label::B { x: t, q }) => (s + t + 1 < n && c(p, q))
                .then_some(Main1Label::B {
                    x: s + t + 1,
                    q: p + q,
                }),
            _ => unreachable!("labels were validated against the parity of n"),
        })
    }

    /// `δ_i` on an algebra generator `γ_q`, `a_q` or `b_q`, `2 ≤ i ≤ q`.
    pub fn delta(&self, i: usize, l: &Main1Label) -> Result<Option<Main1Label>> {
        self.check(l)?;
        let q = l.level();
        if i < 2 || i > q {
            return Err(Error::usage(format!(
                "delta_{i} is defined on levels q >= {i} >= 2, got q={q}"
            )));
        }
        let top = i == q && lucas((2 * q - 1) as u64, q as u64);
        match *l {
            Main1Label::Gamma { x: 0, dx: false, q } => Ok(top.then_some(Main1Label::Gamma {
                x: 0,
                dx: false,
                q: 2 * q,
            })),
            Main1Label::A { x: 0, .. } => Ok(None),
            Main1Label::B { x: 0, q } => {
                Ok((top && self.n() > 1).then_some(Main1Label::B { x: 1, q: 2 * q }))
            }
            _ => Err(Error::usage(format!("{l} is not an algebra generator"))),
        }
    }
}

/// `c_q` in `Sq¹ γ_q = c_q x^n dx γ_{q−1}` for an `n`-odd space, where known.
pub fn sq1_constant(space: &SpaceDescriptor) -> Option<bool> {
    if space.n.is_multiple_of(2) {
        return None;
    }
    match space.kind {
        SpaceKind::ComplexProjective(n) | SpaceKind::QuaternionicProjective(n) => Some(n % 4 == 1),
        SpaceKind::Sphere(m) => Some(m % 2 == 0),
        SpaceKind::CayleyPlane => None,
    }
}

/// `H*(ΛX; F₂)` up to a degree cutoff as a module with product.
#[derive(Clone, Debug)]
pub struct LoopCohomology {
    pub n: u32,
    pub m: u32,
    /// `c_q` (the same for all `q ≥ 1`); `None` for even `n`.
    pub sq1: Option<bool>,
    pub labels: Vec<Main1Label>,
    pub module: FiniteAModule,
}

impl LoopCohomology {
    pub fn to_json(&self) -> String {
        self.module.to_json()
    }
}

pub fn loop_cohomology(space: &SpaceDescriptor, deg_max: u32) -> Result<LoopCohomology> {
    loop_cohomology_for(
        &space.name(),
        space.n,
        space.r,
        sq1_constant(space),
        deg_max,
    )
}

/// The loop-space cohomology for `H*X = F₂[x]/(x^{n+1})`, `|x| = m`. For odd
/// `n` the constant `c_q` must be supplied whenever some `Sq¹ γ_q` lies in range.
pub fn loop_cohomology_for(
    name: &str,
    n: u32,
    m: u32,
    sq1: Option<bool>,
    deg_max: u32,
) -> Result<LoopCohomology> {
    if m < 2 {
        return Err(Error::usage(format!(
            "the generator needs degree at least 2, got {m}"
        )));
    }
    let pres = Main1Presentation::new(GradingSpec::new(n, m)?);
    let odd = n % 2 == 1;
    let mut labels = Vec::new();
    for q in 0.. {
        let level: Vec<Main1Label> = pres
            .labels(q)
            .into_iter()
            .filter(|l| pres.total_degree(l) <= deg_max)
            .collect();
        if level.is_empty() {
            break;
        }
        labels.extend(level);
    }
    let gamma1 = Main1Label::Gamma {
        x: 0,
        dx: false,
        q: 1,
    };
    let sq1 = if odd {
        match sq1 {
            Some(c) => Some(c),
            None if pres.total_degree(&gamma1) < deg_max => {
                return Err(Error::Undetermined(format!(
                    "Sq^1 on gamma_q is not determined for {name}"
                )))
            }
            None => Some(false),
        }
    } else {
        None
    };
    let index: HashMap<Main1Label, usize> =
        labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    let lookup = |l: Main1Label| index.get(&l).copied().unwrap_or(usize::MAX);
    let classes: Vec<ClassSpec> = labels
        .iter()
        .map(|l| ClassSpec::new(l.to_string(), pres.total_degree(l)))
        .collect();
    let sq = |k: u32, c: usize| -> Vec<usize> {
        let l = labels[c];
        if !k.is_multiple_of(m) {
            return match l {
                Main1Label::Gamma { x: 0, dx: false, q }
                    if k == 1 && q >= 1 && sq1 == Some(true) =>
                {
                    vec![lookup(Main1Label::Gamma {
                        x: n,
                        dx: true,
                        q: q - 1,
                    })]
                }
                _ => vec![],
            };
        }
        let i = k / m;
        let image = match l {
            Main1Label::Unit => None,
            Main1Label::Gamma { x, dx, q } => (x + i <= n
                && lucas(q as u64 * u64::from(n + 1) + u64::from(x), u64::from(i)))
            .then_some(Main1Label::Gamma { x: x + i, dx, q }),
            Main1Label::A { x, q } => (x + i < n
                && lucas(q as u64 * u64::from(n + 1) + u64::from(x), u64::from(i)))
            .then_some(Main1Label::A { x: x + i, q }),
            Main1Label::B { x, q } => (x + i < n
                && lucas(q as u64 * u64::from(n + 1) + 1 + u64::from(x), u64::from(i)))
            .then_some(Main1Label::B { x: x + i, q }),
        };
        image.map(lookup).into_iter().collect()
    };
    let product = |a: usize, b: usize| -> Vec<usize> {
        pres.product(&labels[a], &labels[b])
            .expect("labels come from the presentation")
            .map(lookup)
            .into_iter()
            .collect()
    };
    let module = FiniteAModule::build(
        format!("H*(L{name})"),
        deg_max,
        &classes,
        &sq,
        Some(&product),
    )?;
    Ok(LoopCohomology {
        n,
        m,
        sq1,
        labels,
        module,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steenrod::{check_adem, check_cartan, check_instability};

    fn pres(n: u32, m: u32) -> Main1Presentation {
        Main1Presentation::new(GradingSpec::new(n, m).unwrap())
    }

    #[test]
    fn lucas_examples() {
        assert!(lucas(3, 2));
        assert!(lucas(6, 2));
        assert!(!lucas(2, 3));
        for q in 1..=8u64 {
            assert_eq!(lucas(2 * q - 1, q), q.is_power_of_two(), "q={q}");
        }
    }

    #[test]
    fn lucas_matches_pascal() {
        let mut row = vec![1u8];
        for a in 0..200u64 {
            for (b, &v) in row.iter().enumerate() {
                assert_eq!(lucas(a, b as u64), v == 1);
            }
            let mut next = vec![1u8; row.len() + 1];
            for b in 1..row.len() {
                next[b] = row[b - 1] ^ row[b];
            }
            row = next;
        }
    }

    #[test]
    fn dims_totals() {
        for n in [1, 3, 5] {
            let p = pres(n, 2);
            for q in 0..4 {
                let total: usize = (0..200).map(|t| p.dims(q, t)).sum();
                assert_eq!(total, 2 * (n as usize + 1));
            }
        }
        for n in [2, 4] {
            let p = pres(n, 2);
            let total0: usize = (0..200).map(|t| p.dims(0, t)).sum();
            assert_eq!(total0, 2 * n as usize + 1);
            for q in 1..4 {
                let total: usize = (0..200).map(|t| p.dims(q, t)).sum();
                assert_eq!(total, 2 * n as usize);
            }
        }
        let p = pres(2, 2);
        let alpha1 = distinguished(Distinguished::Alpha, 1).unwrap();
        let t = alpha1.internal_degree(&p.grading).pure().unwrap();
        assert_eq!(p.dims(1, t), 1);
    }

    #[test]
    fn representatives_have_label_degrees() {
        for (n, m) in [(1, 3), (2, 4), (3, 2)] {
            let p = pres(n, m);
            for q in 0..3 {
                for l in p.labels(q) {
                    let r = p.representative(&l).unwrap();
                    assert_eq!(
                        r.internal_degree(&p.grading).pure(),
                        Some(p.internal_degree(&l)),
                        "{l}"
                    );
                    assert_eq!(r.level(), q);
                }
            }
        }
    }

    #[test]
    fn product_and_delta_examples() {
        let even = pres(2, 2);
        let b1 = Main1Label::B { x: 0, q: 1 };
        assert_eq!(even.product(&b1, &b1).unwrap(), None);
        let odd = pres(1, 2);
        let g = |q| Main1Label::Gamma { x: 0, dx: false, q };
        assert_eq!(odd.product(&g(1), &g(2)).unwrap(), Some(g(3)));
        assert_eq!(odd.delta(2, &g(2)).unwrap(), Some(g(4)));
        assert_eq!(odd.delta(3, &g(3)).unwrap(), None);
        assert_eq!(odd.delta(2, &g(3)).unwrap(), None);
        assert!(odd.delta(1, &g(1)).is_err());
        assert!(odd.product(&b1, &g(1)).is_err());
        let a = |q| Main1Label::A { x: 0, q };
        assert_eq!(even.product(&a(1), &a(2)).unwrap(), None);
        assert_eq!(
            even.product(&a(1), &Main1Label::B { x: 0, q: 2 }).unwrap(),
            Some(Main1Label::A { x: 1, q: 3 })
        );
        assert_eq!(
            even.delta(2, &Main1Label::B { x: 0, q: 2 }).unwrap(),
            Some(Main1Label::B { x: 1, q: 4 })
        );
    }

    #[test]
    fn divided_power_law() {
        let odd = pres(3, 2);
        let g = |q| Main1Label::Gamma { x: 0, dx: false, q };
        for p in 0..=64usize {
            for q in 0..=64 - p {
                let expected = lucas((p + q) as u64, p as u64).then_some(g(p + q));
                assert_eq!(odd.product(&g(p), &g(q)).unwrap(), expected);
            }
        }
    }

    #[test]
    fn loop_cohomology_examples() {
        let cp2 = loop_cohomology(&SpaceDescriptor::cp(2).unwrap(), 40).unwrap();
        let m = &cp2.module;
        let a1 = m.find("a1").unwrap();
        let b1 = m.find("b1").unwrap();
        assert_eq!(a1.0, 5);
        let sq2a = m.apply_sq(2, a1.0, &m.unit_vector(a1)).unwrap();
        assert_eq!(sq2a, m.unit_vector(m.find("x*a1").unwrap()));
        assert!(m.apply_sq(2, b1.0, &m.unit_vector(b1)).unwrap().is_zero());

        let s2 = loop_cohomology(&SpaceDescriptor::sphere(2).unwrap(), 40).unwrap();
        let m = &s2.module;
        for q in 1..5 {
            let g = m.find(&format!("g{q}")).unwrap();
            let target = if q == 1 {
                "x*dx".to_string()
            } else {
                format!("x*dx*g{}", q - 1)
            };
            let image = m.apply_sq(1, g.0, &m.unit_vector(g)).unwrap();
            assert_eq!(image, m.unit_vector(m.find(&target).unwrap()));
        }

        let hp3 = loop_cohomology(&SpaceDescriptor::hp(3).unwrap(), 80).unwrap();
        for t in 0..80 {
            assert!(hp3.module.sq(1, t).unwrap().is_zero());
        }
    }

    #[test]
    fn undetermined_sq1_is_surfaced() {
        assert!(matches!(
            loop_cohomology_for("X", 3, 2, None, 40),
            Err(Error::Undetermined(_))
        ));
        assert!(loop_cohomology_for("X", 2, 4, None, 40).is_ok());
    }

    #[test]
    fn axioms_on_small_spaces() {
        for space in [
            SpaceDescriptor::cp(3).unwrap(),
            SpaceDescriptor::sphere(3).unwrap(),
        ] {
            let l = loop_cohomology(&space, 40).unwrap();
            assert!(check_instability(&l.module).pass);
            let c = check_cartan(&l.module, 8).unwrap();
            assert!(c.pass, "{:?}", c.failures);
            assert!(check_adem(&l.module, 8).pass);
        }
        let s3 = loop_cohomology(&SpaceDescriptor::sphere(3).unwrap(), 40).unwrap();
        for k in 1..40 {
            for t in 0..=40 - k {
                assert!(s3.module.sq(k, t).unwrap().is_zero());
            }
        }
    }
}
