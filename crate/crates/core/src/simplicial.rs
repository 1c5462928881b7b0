//! The almost-free simplicial resolution `R_•` of `F₂[x]/(x^{n+1})` and its
//! levelwise de Rham algebras.
//!
//! `R_q = F₂[x, y_1..y_q]` with `|y_j| = (n+1)|x|`. Faces and degeneracies fix
//! `x` and act on the `y_j` by the tables in [`ResolutionContext::face_y`] and
//! [`ResolutionContext::degeneracy_y`]; on `dy_j` they act by the de Rham
//! differential of the image of `y_j`, the unique extension commuting with `d`.

use std::collections::HashMap;

use crate::algebra::{
    monomial_basis, AlgebraElement, ChainKind, Generator, GeneratorMap, GradingSpec, Monomial,
};
use crate::error::{Error, Result};
use crate::gf2::{BitRow, Subspace};
use crate::homology::ChainComplex;
use crate::report::CheckReport;

/// Image of a polynomial generator `y_j` under a face or degeneracy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum YImage {
    Zero,
    XPower(u32),
    Y(usize),
}

/// Replaces one entry of the face table. Only used to build negative controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FaceMutation {
    /// Source level of the face map.
    pub level: usize,
    pub face: usize,
    pub y_index: usize,
    pub image: YImage,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResolutionContext {
    grading: GradingSpec,
    max_level: usize,
    mutations: Vec<FaceMutation>,
}

impl ResolutionContext {
    pub fn new(grading: GradingSpec, max_level: usize) -> Self {
        Self {
            grading,
            max_level,
            mutations: Vec::new(),
        }
    }

    /// A context whose face table has one entry overwritten.
    pub fn with_mutation(mut self, mutation: FaceMutation) -> Self {
        self.mutations.push(mutation);
        self
    }

    pub fn grading(&self) -> &GradingSpec {
        &self.grading
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    pub fn is_mutated(&self) -> bool {
        !self.mutations.is_empty()
    }

    /// `d_i(y_j)` on `R_q`:
    /// `x^{n+1}` for `i=0, j=1`; `y_{j-1}` for `i<j, j>1`; `y_j` for `i≥j, j<q`;
    /// `0` for `i=j=q`.
    pub fn face_y(&self, q: usize, i: usize, j: usize) -> YImage {
        if let Some(m) = self
            .mutations
            .iter()
            .find(|m| m.level == q && m.face == i && m.y_index == j)
        {
            return m.image;
        }
        if i == 0 && j == 1 {
            YImage::XPower(self.grading.n + 1)
        } else if i < j && j > 1 {
            YImage::Y(j - 1)
        } else if j < q {
            YImage::Y(j)
        } else {
            YImage::Zero
        }
    }

    /// `s_i(y_j)`: `y_j` for `i ≥ j`, `y_{j+1}` for `i < j`.
    pub fn degeneracy_y(&self, i: usize, j: usize) -> YImage {
        if i >= j {
            YImage::Y(j)
        } else {
            YImage::Y(j + 1)
        }
    }

    fn generator_map(
        &self,
        source: usize,
        target: usize,
        y_rule: impl Fn(usize) -> YImage,
    ) -> GeneratorMap {
        let to_element = |img: YImage| -> AlgebraElement {
            match img {
                YImage::Zero => AlgebraElement::zero(target),
                YImage::XPower(k) => Monomial::new(k, false, vec![0; target], vec![false; target])
                    .expect("matching lengths")
                    .into(),
                YImage::Y(k) => AlgebraElement::generator(target, Generator::Y(k))
                    .expect("face and degeneracy tables stay in range"),
            }
        };
        let y: Vec<AlgebraElement> = (1..=source).map(|j| to_element(y_rule(j))).collect();
        let dy = y.iter().map(AlgebraElement::derham).collect();
        GeneratorMap {
            target_level: target,
            x: AlgebraElement::generator(target, Generator::X).unwrap(),
            dx: AlgebraElement::generator(target, Generator::Dx).unwrap(),
            y,
            dy,
        }
    }

    pub fn face_map(&self, q: usize, i: usize) -> Result<GeneratorMap> {
        if q == 0 || i > q {
            return Err(Error::usage(format!(
                "face d_{i} is not defined on level {q}"
            )));
        }
        Ok(self.generator_map(q, q - 1, |j| self.face_y(q, i, j)))
    }

    pub fn degeneracy_map(&self, q: usize, i: usize) -> Result<GeneratorMap> {
        if i > q {
            return Err(Error::usage(format!(
                "degeneracy s_{i} is not defined on level {q}"
            )));
        }
        Ok(self.generator_map(q, q + 1, |j| self.degeneracy_y(i, j)))
    }

    pub fn face(&self, i: usize, a: &AlgebraElement) -> Result<AlgebraElement> {
        Ok(self.face_map(a.level(), i)?.apply(a))
    }

    pub fn degeneracy(&self, i: usize, a: &AlgebraElement) -> Result<AlgebraElement> {
        Ok(self.degeneracy_map(a.level(), i)?.apply(a))
    }

    /// `s_{i_k} ∘ … ∘ s_{i_1}` applied to `a`, where `indices = [i_1, …, i_k]`
    /// lists the maps in application order.
    pub fn degeneracies(&self, indices: &[usize], a: &AlgebraElement) -> Result<AlgebraElement> {
        let mut out = a.clone();
        for &i in indices {
            out = self.degeneracy(i, &out)?;
        }
        Ok(out)
    }

    pub fn distinguished(&self, kind: Distinguished, q: usize) -> Result<AlgebraElement> {
        distinguished(kind, q)
    }

    /// Whether `a` lies in the degenerate subcomplex: the span of all
    /// `s_i(b)` with `b` at level `q-1`.
    pub fn is_degenerate(&self, a: &AlgebraElement) -> Result<bool> {
        let q = a.level();
        if a.is_zero() {
            return Ok(true);
        }
        if q == 0 {
            return Ok(false);
        }
        let mut by_degree: HashMap<u32, Vec<Monomial>> = HashMap::new();
        for m in a.terms() {
            by_degree
                .entry(m.internal_degree(&self.grading))
                .or_default()
                .push(m.clone());
        }
        for (t, monos) in by_degree {
            let basis = monomial_basis(q, &self.grading, t, ChainKind::DeRham);
            let index: HashMap<&Monomial, usize> =
                basis.iter().enumerate().map(|(k, m)| (m, k)).collect();
            let to_row =
                |e: &AlgebraElement| BitRow::from_indices(basis.len(), e.terms().map(|m| index[m]));
            let mut span = Subspace::zero(basis.len());
            for b in monomial_basis(q - 1, &self.grading, t, ChainKind::DeRham) {
                let b: AlgebraElement = b.into();
                for i in 0..q {
                    span.insert(to_row(&self.degeneracy(i, &b)?));
                }
            }
            let component = AlgebraElement::from_terms(q, monos)?;
            if !span.contains(&to_row(&component)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Checks every simplicial identity in which a level-`q` face or
    /// degeneracy takes part, on all algebra generators of the source levels
    /// `q-1`, `q`, `q+1`.
    pub fn check_simplicial_identities(&self, q: usize) -> CheckReport {
        let mut report = CheckReport::new(format!("simplicial identities at level {q}"));
        let sources = q.saturating_sub(1)..=q + 1;
        for p in sources {
            if let Err(e) = self.check_identities_from(p, &mut report) {
                report.fail(format!("evaluation error at source level {p}: {e}"));
            }
        }
        report
    }

    fn check_identities_from(&self, p: usize, report: &mut CheckReport) -> Result<()> {
        let gens = level_generators(p);
        let mut compare = |name: String, lhs: AlgebraElement, rhs: AlgebraElement| {
            report.expect(lhs == rhs, || format!("{name}: {lhs} != {rhs}"));
        };
        for g in &gens {
            let label = g.to_string();
            // d_i d_j = d_{j-1} d_i for i < j
            if p >= 2 {
                for j in 1..=p {
                    let dj = self.face(j, g)?;
                    for i in 0..j {
                        let lhs = self.face(i, &dj)?;
                        let rhs = self.face(j - 1, &self.face(i, g)?)?;
                        compare(format!("d{i} d{j} on {label} at level {p}"), lhs, rhs);
                    }
                }
            }
            for j in 0..=p {
                let sj = self.degeneracy(j, g)?;
                for i in 0..=p + 1 {
                    let lhs = self.face(i, &sj)?;
                    let rhs = if i < j {
                        self.degeneracy(j - 1, &self.face(i, g)?)?
                    } else if i == j || i == j + 1 {
                        g.clone()
                    } else {
                        self.degeneracy(j, &self.face(i - 1, g)?)?
                    };
                    compare(format!("d{i} s{j} on {label} at level {p}"), lhs, rhs);
                }
                // s_i s_j = s_{j+1} s_i for i <= j
                for i in 0..=j {
                    let lhs = self.degeneracy(i, &sj)?;
                    let rhs = self.degeneracy(j + 1, &self.degeneracy(i, g)?)?;
                    compare(format!("s{i} s{j} on {label} at level {p}"), lhs, rhs);
                }
            }
        }
        Ok(())
    }

    /// Verifies that the polynomial resolution has `π₀ = F₂[x]/(x^{n+1})` and
    /// `π_q = 0` for `1 ≤ q < max_level`, in internal degrees up to `degree_bound`.
    pub fn check_pi0(&self, degree_bound: u32) -> CheckReport {
        let mut report = CheckReport::new(format!(
            "resolution homotopy for n={}, m={} up to degree {degree_bound}",
            self.grading.n, self.grading.m
        ));
        let complex = ChainComplex::new(self.clone(), ChainKind::Polynomial);
        for q in 0..self.max_level.max(1) {
            for t in 0..=degree_bound {
                let expected = usize::from(
                    q == 0 && t % self.grading.m == 0 && t / self.grading.m <= self.grading.n,
                );
                match complex.homology_dim(q, t) {
                    Ok(d) => report.expect(d == expected, || {
                        format!("pi_{q} in degree {t}: dimension {d}, expected {expected}")
                    }),
                    Err(e) => report.fail(format!("pi_{q} in degree {t}: {e}")),
                }
            }
        }
        report
    }
}

/// The algebra generators `x, dx, y_j, dy_j` of level `p` as elements.
pub fn level_generators(p: usize) -> Vec<AlgebraElement> {
    let mut out = vec![
        AlgebraElement::generator(p, Generator::X).unwrap(),
        AlgebraElement::generator(p, Generator::Dx).unwrap(),
    ];
    for j in 1..=p {
        out.push(AlgebraElement::generator(p, Generator::Y(j)).unwrap());
        out.push(AlgebraElement::generator(p, Generator::Dy(j)).unwrap());
    }
    out
}

/// Named elements of `Ω(R_q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Distinguished {
    /// `ω_q = dy_1 ⋯ dy_q`, `ω_0 = 1`.
    Omega,
    /// `α_q = dx·ω_q`.
    Alpha,
    /// `β_q = x·ω_q + dx·Σ_i y_i (ω_q)_i`.
    Beta,
    /// `(ω_q)_i`, the product with `dy_i` omitted.
    OmegaHat(usize),
    /// `(ω_q)_{i,j}`, `i < j`, with `dy_i` and `dy_j` omitted.
    OmegaHatHat(usize, usize),
}

pub fn distinguished(kind: Distinguished, q: usize) -> Result<AlgebraElement> {
    let omega_without = |skip: &[usize]| -> AlgebraElement {
        let dy = (1..=q).map(|j| !skip.contains(&j)).collect();
        Monomial::new(0, false, vec![0; q], dy).unwrap().into()
    };
    match kind {
        Distinguished::Omega => Ok(omega_without(&[])),
        Distinguished::Alpha => {
            let dx = AlgebraElement::generator(q, Generator::Dx)?;
            dx.mul(&omega_without(&[]))
        }
        Distinguished::Beta => {
            let x = AlgebraElement::generator(q, Generator::X)?;
            let dx = AlgebraElement::generator(q, Generator::Dx)?;
            let mut out = x.mul(&omega_without(&[]))?;
            for i in 1..=q {
                let yi = AlgebraElement::generator(q, Generator::Y(i))?;
                out.add_assign(&dx.mul(&yi)?.mul(&omega_without(&[i]))?);
            }
            Ok(out)
        }
        Distinguished::OmegaHat(i) => {
            if i == 0 || i > q {
                return Err(Error::usage(format!("(omega_{q})_{i} needs 1 <= i <= {q}")));
            }
            Ok(omega_without(&[i]))
        }
        Distinguished::OmegaHatHat(i, j) => {
            if i == 0 || i >= j || j > q {
                return Err(Error::usage(format!(
                    "(omega_{q})_({i},{j}) needs 1 <= i < j <= {q}"
                )));
            }
            Ok(omega_without(&[i, j]))
        }
    }
}
