//! Monomial calculus in `Ω(R_q) = F₂[x, y_1..y_q] ⊗ Λ(dx, dy_1..dy_q)`.
//!
//! Over F₂ every sign in the graded-commutative product is trivial, so the
//! algebra is commutative; the exterior generators square to zero.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The truncation exponent `n` (so `x^{n+1} = 0` in the target algebra) and
/// the degree `m = |x|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GradingSpec {
    pub n: u32,
    pub m: u32,
}

impl GradingSpec {
    pub fn new(n: u32, m: u32) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::usage(format!(
                "grading needs n >= 1 and m >= 1, got n={n}, m={m}"
            )));
        }
        Ok(Self { n, m })
    }

    pub fn x_degree(&self) -> u32 {
        self.m
    }

    pub fn dx_degree(&self) -> u32 {
        self.m - 1
    }

    pub fn y_degree(&self) -> u32 {
        (self.n + 1) * self.m
    }

    pub fn dy_degree(&self) -> u32 {
        self.y_degree() - 1
    }

    pub fn is_n_odd(&self) -> bool {
        self.n % 2 == 1
    }
}

/// One algebra generator of `Ω(R_q)`; `Y(j)` and `Dy(j)` are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    X,
    Dx,
    Y(usize),
    Dy(usize),
}

/// Which part of `Ω(R_q)` a basis enumeration covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChainKind {
    /// The polynomial algebra `R_q` alone.
    Polynomial,
    /// The full de Rham algebra `Ω(R_q)`.
    DeRham,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Monomial {
    x: u32,
    dx: bool,
    y: Vec<u32>,
    dy: Vec<bool>,
}

impl Monomial {
    pub fn one(level: usize) -> Self {
        Self {
            x: 0,
            dx: false,
            y: vec![0; level],
            dy: vec![false; level],
        }
    }

    pub fn new(x: u32, dx: bool, y: Vec<u32>, dy: Vec<bool>) -> Result<Self> {
        if y.len() != dy.len() {
            return Err(Error::usage(format!(
                "y exponents have length {} but dy flags have length {}",
                y.len(),
                dy.len()
            )));
        }
        Ok(Self { x, dx, y, dy })
    }

    pub fn generator(level: usize, g: Generator) -> Result<Self> {
        let mut mono = Self::one(level);
        match g {
            Generator::X => mono.x = 1,
            Generator::Dx => mono.dx = true,
            Generator::Y(j) | Generator::Dy(j) if j == 0 || j > level => {
                return Err(Error::usage(format!(
                    "generator index {j} out of range 1..={level}"
                )))
            }
            Generator::Y(j) => mono.y[j - 1] = 1,
            Generator::Dy(j) => mono.dy[j - 1] = true,
        }
        Ok(mono)
    }

    pub fn level(&self) -> usize {
        self.y.len()
    }

    pub fn x_exp(&self) -> u32 {
        self.x
    }

    pub fn has_dx(&self) -> bool {
        self.dx
    }

    pub fn y_exps(&self) -> &[u32] {
        &self.y
    }

    pub fn dy_flags(&self) -> &[bool] {
        &self.dy
    }

    pub fn is_one(&self) -> bool {
        self.x == 0 && !self.dx && self.y.iter().all(|&e| e == 0) && !self.dy.iter().any(|&f| f)
    }

    pub fn has_exterior(&self) -> bool {
        self.dx || self.dy.iter().any(|&f| f)
    }

    /// Product of two monomials at the same level, `None` when an exterior
    /// generator repeats.
    pub fn mul(&self, other: &Monomial) -> Option<Monomial> {
        debug_assert_eq!(self.level(), other.level());
        if self.dx && other.dx {
            return None;
        }
        if self.dy.iter().zip(&other.dy).any(|(&a, &b)| a && b) {
            return None;
        }
        Some(Monomial {
            x: self.x + other.x,
            dx: self.dx || other.dx,
            y: self.y.iter().zip(&other.y).map(|(a, b)| a + b).collect(),
            dy: self
                .dy
                .iter()
                .zip(&other.dy)
                .map(|(&a, &b)| a || b)
                .collect(),
        })
    }

    pub fn pow(&self, k: u32) -> Option<Monomial> {
        match k {
            0 => Some(Monomial::one(self.level())),
            1 => Some(self.clone()),
            _ if self.has_exterior() => None,
            _ => Some(Monomial {
                x: self.x * k,
                dx: false,
                y: self.y.iter().map(|e| e * k).collect(),
                dy: self.dy.clone(),
            }),
        }
    }

    pub fn internal_degree(&self, g: &GradingSpec) -> u32 {
        let ys: u32 = self.y.iter().sum();
        let dys = self.dy.iter().filter(|&&f| f).count() as u32;
        g.m * self.x + g.dx_degree() * u32::from(self.dx) + g.y_degree() * ys + g.dy_degree() * dys
    }

    /// The wedge count `w` and polynomial grading `p` with `p(x)=2, p(dx)=1,
    /// p(y)=2n+2, p(dy)=2n+1`.
    pub fn bigrading(&self, n: u32) -> (u32, u32) {
        let ys: u32 = self.y.iter().sum();
        let dys = self.dy.iter().filter(|&&f| f).count() as u32;
        let w = u32::from(self.dx) + dys;
        let p = 2 * self.x + u32::from(self.dx) + (2 * n + 2) * ys + (2 * n + 1) * dys;
        (w, p)
    }

    /// de Rham differential of a monomial; a sum of at most `1 + level` terms.
    pub fn derham(&self) -> Vec<Monomial> {
        let mut out = Vec::new();
        if self.x % 2 == 1 && !self.dx {
            let mut m = self.clone();
            m.x -= 1;
            m.dx = true;
            out.push(m);
        }
        for j in 0..self.level() {
            if self.y[j] % 2 == 1 && !self.dy[j] {
                let mut m = self.clone();
                m.y[j] -= 1;
                m.dy[j] = true;
                out.push(m);
            }
        }
        out
    }

    /// Applies an algebra homomorphism given on generators. Exponents are
    /// expanded by repeated multiplication.
    pub fn substitute(&self, map: &GeneratorMap) -> AlgebraElement {
        let mut acc = AlgebraElement::one(map.target_level);
        let factor = |acc: &mut AlgebraElement, img: &AlgebraElement, k: u32| {
            for _ in 0..k {
                if acc.is_zero() {
                    return;
                }
                *acc = acc.mul_unchecked(img);
            }
        };
        factor(&mut acc, &map.x, self.x);
        if self.dx {
            factor(&mut acc, &map.dx, 1);
        }
        for j in 0..self.level() {
            factor(&mut acc, &map.y[j], self.y[j]);
            if self.dy[j] {
                factor(&mut acc, &map.dy[j], 1);
            }
        }
        acc
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.x {
            0 => {}
            1 => parts.push("x".into()),
            k => parts.push(format!("x^{k}")),
        }
        if self.dx {
            parts.push("dx".into());
        }
        for (j, &e) in self.y.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("y{}", j + 1)),
                k => parts.push(format!("y{}^{k}", j + 1)),
            }
        }
        for (j, &flag) in self.dy.iter().enumerate() {
            if flag {
                parts.push(format!("dy{}", j + 1));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Images of every generator of `Ω(R_q)` under an algebra map into level
/// `target_level`.
#[derive(Clone, Debug)]
pub struct GeneratorMap {
    pub target_level: usize,
    pub x: AlgebraElement,
    pub dx: AlgebraElement,
    pub y: Vec<AlgebraElement>,
    pub dy: Vec<AlgebraElement>,
}

impl GeneratorMap {
    pub fn apply(&self, a: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.target_level);
        for mono in &a.terms {
            out.add_assign(&mono.substitute(self));
        }
        out
    }
}

/// A finite F₂-sum of distinct monomials at one simplicial level.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct AlgebraElement {
    level: usize,
    terms: BTreeSet<Monomial>,
}

/// Internal degree of an element: the zero element has none.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Degree {
    Zero,
    Pure(u32),
    Mixed(BTreeSet<u32>),
}

impl Degree {
    pub fn pure(&self) -> Option<u32> {
        match self {
            Degree::Pure(d) => Some(*d),
            _ => None,
        }
    }
}

impl AlgebraElement {
    pub fn zero(level: usize) -> Self {
        Self {
            level,
            terms: BTreeSet::new(),
        }
    }

    pub fn one(level: usize) -> Self {
        Monomial::one(level).into()
    }

    pub fn generator(level: usize, g: Generator) -> Result<Self> {
        Ok(Monomial::generator(level, g)?.into())
    }

    /// F₂-sum of the given monomials (repeated monomials cancel in pairs).
    pub fn from_terms(level: usize, monos: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        let mut out = Self::zero(level);
        for m in monos {
            if m.level() != level {
                return Err(Error::usage(format!(
                    "monomial at level {} added to element at level {level}",
                    m.level()
                )));
            }
            out.toggle(m);
        }
        Ok(out)
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn as_monomial(&self) -> Option<&Monomial> {
        (self.terms.len() == 1).then(|| self.terms.iter().next().unwrap())
    }

    pub fn toggle(&mut self, m: Monomial) {
        debug_assert_eq!(m.level(), self.level);
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add_assign(&mut self, other: &AlgebraElement) {
        debug_assert_eq!(self.level, other.level);
        for m in &other.terms {
            self.toggle(m.clone());
        }
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_level(other)?;
        let mut out = self.clone();
        out.add_assign(other);
        Ok(out)
    }

    /// Graded-commutative product.
    pub fn mul(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_level(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.level);
        for a in &self.terms {
            for b in &other.terms {
                if let Some(p) = a.mul(b) {
                    out.toggle(p);
                }
            }
        }
        out
    }

    /// de Rham differential, the derivation with `x ↦ dx`, `y_j ↦ dy_j`.
    pub fn derham(&self) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.level);
        for m in &self.terms {
            for t in m.derham() {
                out.toggle(t);
            }
        }
        out
    }

    pub fn internal_degree(&self, g: &GradingSpec) -> Degree {
        let degrees: BTreeSet<u32> = self.terms.iter().map(|m| m.internal_degree(g)).collect();
        match degrees.len() {
            0 => Degree::Zero,
            1 => Degree::Pure(*degrees.iter().next().unwrap()),
            _ => Degree::Mixed(degrees),
        }
    }

    /// `(w, p)` of each term, in term order.
    pub fn bigrading(&self, n: u32) -> Vec<(u32, u32)> {
        self.terms.iter().map(|m| m.bigrading(n)).collect()
    }

    /// Parses the textual syntax produced by `Display`, e.g. `x^2*dx*dy1 + y1`.
    pub fn parse(level: usize, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty element".into()));
        }
        let mut out = AlgebraElement::zero(level);
        for term in s.split('+') {
            if let Some(m) = parse_monomial(level, term.trim())? {
                out.toggle(m);
            }
        }
        Ok(out)
    }

    fn check_level(&self, other: &AlgebraElement) -> Result<()> {
        if self.level != other.level {
            return Err(Error::usage(format!(
                "elements at levels {} and {} cannot be combined",
                self.level, other.level
            )));
        }
        Ok(())
    }
}

impl From<Monomial> for AlgebraElement {
    fn from(m: Monomial) -> Self {
        let level = m.level();
        let mut terms = BTreeSet::new();
        terms.insert(m);
        Self { level, terms }
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|m| m.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Parses one product of factors. Returns `Ok(None)` for a product that is
/// zero (an explicit `0` or a repeated exterior factor).
fn parse_monomial(level: usize, s: &str) -> Result<Option<Monomial>> {
    if s == "0" {
        return Ok(None);
    }
    let mut acc = Monomial::one(level);
    if s == "1" {
        return Ok(Some(acc));
    }
    for factor in s.split('*') {
        let factor = factor.trim();
        let (base, exp) = match factor.split_once('^') {
            Some((b, e)) => (
                b,
                e.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad exponent in '{factor}'")))?,
            ),
            None => (factor, 1),
        };
        let generator = if base == "x" {
            Generator::X
        } else if base == "dx" {
            Generator::Dx
        } else if base == "1" {
            continue;
        } else if let Some(idx) = base.strip_prefix("dy") {
            Generator::Dy(parse_index(idx, factor)?)
        } else if let Some(idx) = base.strip_prefix('y') {
            Generator::Y(parse_index(idx, factor)?)
        } else {
            return Err(Error::Parse(format!("unknown factor '{factor}'")));
        };
        let g = Monomial::generator(level, generator).map_err(|e| Error::Parse(e.to_string()))?;
        let Some(power) = g.pow(exp) else {
            return Ok(None);
        };
        match acc.mul(&power) {
            Some(p) => acc = p,
            None => return Ok(None),
        }
    }
    Ok(Some(acc))
}

fn parse_index(idx: &str, factor: &str) -> Result<usize> {
    idx.parse::<usize>()
        .map_err(|_| Error::Parse(format!("bad generator index in '{factor}'")))
}

impl FromStr for GradingSpec {
    type Err = Error;

    /// `n,m`
    fn from_str(s: &str) -> Result<Self> {
        let (n, m) = s
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected 'n,m', got '{s}'")))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad integer '{v}'")))
        };
        GradingSpec::new(parse(n)?, parse(m)?)
    }
}

/// All monomials at `level` of internal degree exactly `t`, in canonical order.
pub fn monomial_basis(level: usize, g: &GradingSpec, t: u32, kind: ChainKind) -> Vec<Monomial> {
    let mut out = Vec::new();
    let exterior_choices: u32 = match kind {
        ChainKind::Polynomial => 1,
        ChainKind::DeRham => 1 << (level + 1),
    };
    for mask in 0..exterior_choices {
        let dx = mask & 1 == 1;
        let dy: Vec<bool> = (0..level).map(|j| mask >> (j + 1) & 1 == 1).collect();
        let dys = dy.iter().filter(|&&f| f).count() as u32;
        let fixed = g.dx_degree() * u32::from(dx) + g.dy_degree() * dys;
        if fixed > t {
            continue;
        }
        let mut y = vec![0u32; level];
        distribute_y(&mut y, 0, t - fixed, g, &mut |y, rest| {
            if rest % g.m == 0 {
                out.push(Monomial {
                    x: rest / g.m,
                    dx,
                    y: y.to_vec(),
                    dy: dy.clone(),
                });
            }
        });
    }
    out.sort();
    out
}

fn distribute_y(
    y: &mut Vec<u32>,
    j: usize,
    rest: u32,
    g: &GradingSpec,
    emit: &mut dyn FnMut(&[u32], u32),
) {
    if j == y.len() {
        emit(y, rest);
        return;
    }
    let yd = g.y_degree();
    for e in 0..=rest / yd {
        y[j] = e;
        distribute_y(y, j + 1, rest - e * yd, g, emit);
    }
    y[j] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(level: usize, s: &str) -> AlgebraElement {
        AlgebraElement::parse(level, s).unwrap()
    }

    #[test]
    fn multiply_examples() {
        let dx = el(0, "dx");
        assert!(dx.mul(&dx).unwrap().is_zero());
        let x = el(0, "x");
        assert_eq!(x.mul(&x).unwrap(), el(0, "x^2"));
        let s = el(2, "dy1 + dy2");
        assert!(s.mul(&s).unwrap().is_zero());
        assert!(el(1, "x").mul(&el(2, "x")).is_err());
    }

    #[test]
    fn derham_examples() {
        assert!(el(0, "x^2").derham().is_zero());
        assert_eq!(el(1, "x*y1").derham(), el(1, "x*dy1 + y1*dx"));
        assert!(el(0, "x^4").derham().is_zero());
        assert_eq!(el(0, "x^3").derham(), el(0, "x^2*dx"));
    }

    #[test]
    fn degree_examples() {
        let g = GradingSpec::new(2, 4).unwrap();
        assert_eq!(el(0, "x").internal_degree(&g), Degree::Pure(4));
        assert_eq!(
            el(3, "dy1*dy2*dy3").internal_degree(&g),
            Degree::Pure(3 * (3 * 4 - 1))
        );
        assert_eq!(el(1, "x + dx").internal_degree(&g).pure(), None);
        assert_eq!(el(1, "0").internal_degree(&g), Degree::Zero);
    }

    #[test]
    fn bigrading_examples() {
        let n = 3;
        assert_eq!(el(2, "dy1*dy2").bigrading(n), vec![(2, 2 * (2 * n + 1))]);
        // x^t dx ω_q with t = 2, q = 2
        assert_eq!(
            el(2, "x^2*dx*dy1*dy2").bigrading(n),
            vec![(3, 2 * 2 + 1 + 2 * (2 * n + 1))]
        );
    }

    #[test]
    fn basis_examples() {
        let g = GradingSpec::new(1, 2).unwrap();
        assert_eq!(
            monomial_basis(0, &g, 0, ChainKind::DeRham),
            vec![Monomial::one(0)]
        );
        assert_eq!(
            monomial_basis(0, &g, 2, ChainKind::DeRham),
            vec![Monomial::generator(0, Generator::X).unwrap()]
        );
        let b = monomial_basis(1, &g, 3, ChainKind::DeRham);
        let rendered: Vec<String> = b.iter().map(|m| m.to_string()).collect();
        assert_eq!(rendered, vec!["dy1", "x*dx"]);
        assert!(monomial_basis(1, &g, 3, ChainKind::Polynomial).is_empty());
    }

    #[test]
    fn basis_is_exhaustive() {
        // Compare with a brute-force filter over a box of exponents.
        let g = GradingSpec::new(2, 2).unwrap();
        for level in 0..3 {
            for t in 0..20 {
                let fast = monomial_basis(level, &g, t, ChainKind::DeRham);
                let mut slow = Vec::new();
                for x in 0..=t {
                    for mask in 0..(1u32 << (level + 1)) {
                        let ymax = t / g.y_degree();
                        let mut ys = vec![0u32; level];
                        loop {
                            let m = Monomial {
                                x,
                                dx: mask & 1 == 1,
                                y: ys.clone(),
                                dy: (0..level).map(|j| mask >> (j + 1) & 1 == 1).collect(),
                            };
                            if m.internal_degree(&g) == t {
                                slow.push(m);
                            }
                            let mut k = 0;
                            while k < level && ys[k] == ymax {
                                ys[k] = 0;
                                k += 1;
                            }
                            if k == level {
                                break;
                            }
                            ys[k] += 1;
                        }
                    }
                }
                slow.sort();
                assert_eq!(fast, slow, "level {level} degree {t}");
            }
        }
    }

    #[test]
    fn parse_round_trip_and_errors() {
        let e = el(3, "x^2*dx*dy1*dy3 + y2^3*x + 1");
        assert_eq!(el(3, &e.to_string()), e);
        assert!(AlgebraElement::parse(1, "dy2").is_err());
        assert!(AlgebraElement::parse(1, "z").is_err());
        assert!(el(1, "dx*dx").is_zero());
        assert!(el(1, "x + x").is_zero());
    }
}
