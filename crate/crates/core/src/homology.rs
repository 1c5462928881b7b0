//! Homology of the normalized complex of `Ω(R_•)` (or of `R_•` itself),
//! computed one internal degree at a time.
//!
//! `N_q = ∩_{i≥1} ker d_i` with differential `d_0`. In slice `(q, t)`:
//! cycles are `∩_{i=0..q} ker d_i`, boundaries are `d_0(N_{q+1})`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{monomial_basis, AlgebraElement, ChainKind, Degree, GradingSpec, Monomial};
use crate::error::{Error, Result};
use crate::gf2::{express, BitMatrix, BitRow, Subspace};
use crate::simplicial::ResolutionContext;

/// Monomial coordinates of one `(q, t)` slice.
#[derive(Debug)]
pub struct SliceBasis {
    pub q: usize,
    pub t: u32,
    pub basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl SliceBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of `a`; fails if a term lies outside the slice.
    pub fn to_vector(&self, a: &AlgebraElement) -> Result<BitRow> {
        let mut v = BitRow::zeros(self.dim());
        for m in a.terms() {
            let k = self.index_of(m).ok_or_else(|| {
                Error::usage(format!(
                    "term {m} is not in slice (q={}, t={})",
                    self.q, self.t
                ))
            })?;
            v.set(k, true);
        }
        Ok(v)
    }

    pub fn to_element(&self, v: &BitRow) -> AlgebraElement {
        AlgebraElement::from_terms(self.q, v.ones().map(|k| self.basis[k].clone()))
            .expect("slice monomials share a level")
    }
}

/// A slice with its face matrices and the normalized and cycle subspaces.
#[derive(Debug)]
pub struct BidegreeSlice {
    pub coords: Arc<SliceBasis>,
    /// `faces[i][k]` is `d_i` of basis monomial `k` in the `(q-1, t)` coordinates.
    faces: Vec<Vec<BitRow>>,
    target_dim: usize,
    pub normalized: Subspace,
    pub cycles: Subspace,
}

impl BidegreeSlice {
    pub fn face_matrix(&self, i: usize) -> BitMatrix {
        BitMatrix::from_columns(self.target_dim, &self.faces[i])
    }

    /// `d_i` applied to a coordinate vector.
    pub fn apply_face(&self, i: usize, v: &BitRow) -> BitRow {
        let mut out = BitRow::zeros(self.target_dim);
        for k in v.ones() {
            out.xor_assign(&self.faces[i][k]);
        }
        out
    }
}

/// One homology group `H_q` in internal degree `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyCell {
    pub q: usize,
    pub t: u32,
    pub dim: usize,
    /// Normalized cycles whose classes form a basis.
    pub representatives: Vec<AlgebraElement>,
}

impl HomologyCell {
    /// Degree of the corresponding loop-space cohomology classes.
    pub fn total_degree(&self) -> i64 {
        i64::from(self.t) - self.q as i64
    }
}

type SliceKey = (usize, u32);

/// The normalized chain complex of one resolution, with slices computed on
/// demand and cached. Safe to share across threads.
#[derive(Debug)]
pub struct ChainComplex {
    ctx: ResolutionContext,
    kind: ChainKind,
    shuffle_seed: Option<u64>,
    coords: Mutex<HashMap<SliceKey, Arc<SliceBasis>>>,
    slices: Mutex<HashMap<SliceKey, Arc<BidegreeSlice>>>,
}

impl ChainComplex {
    pub fn new(ctx: ResolutionContext, kind: ChainKind) -> Self {
        Self {
            ctx,
            kind,
            shuffle_seed: None,
            coords: Mutex::default(),
            slices: Mutex::default(),
        }
    }

    /// Same complex with every slice basis put in a seeded random order.
    /// Dimensions must not depend on the order.
    pub fn with_shuffled_bases(mut self, seed: u64) -> Self {
        self.shuffle_seed = Some(seed);
        self
    }

    pub fn context(&self) -> &ResolutionContext {
        &self.ctx
    }

    pub fn grading(&self) -> &GradingSpec {
        self.ctx.grading()
    }

    pub fn kind(&self) -> ChainKind {
        self.kind
    }

    pub fn coordinates(&self, q: usize, t: u32) -> Arc<SliceBasis> {
        if let Some(c) = self.coords.lock().unwrap().get(&(q, t)) {
            return c.clone();
        }
        let mut basis = monomial_basis(q, self.ctx.grading(), t, self.kind);
        if let Some(seed) = self.shuffle_seed {
            let mut rng = SplitMix64::seed_from_u64(seed ^ ((q as u64) << 32) ^ u64::from(t));
            basis.shuffle(&mut rng);
        }
        let index = basis
            .iter()
            .enumerate()
            .map(|(k, m)| (m.clone(), k))
            .collect();
        let c = Arc::new(SliceBasis { q, t, basis, index });
        self.coords
            .lock()
            .unwrap()
            .entry((q, t))
            .or_insert(c)
            .clone()
    }

    pub fn slice(&self, q: usize, t: u32) -> Result<Arc<BidegreeSlice>> {
        if let Some(s) = self.slices.lock().unwrap().get(&(q, t)) {
            return Ok(s.clone());
        }
        let s = Arc::new(self.build_slice(q, t)?);
        Ok(self
            .slices
            .lock()
            .unwrap()
            .entry((q, t))
            .or_insert(s)
            .clone())
    }

    fn build_slice(&self, q: usize, t: u32) -> Result<BidegreeSlice> {
        let coords = self.coordinates(q, t);
        let dim = coords.dim();
        if q == 0 {
            return Ok(BidegreeSlice {
                coords,
                faces: Vec::new(),
                target_dim: 0,
                normalized: Subspace::full(dim),
                cycles: Subspace::full(dim),
            });
        }
        let target = self.coordinates(q - 1, t);
        let mut faces = Vec::with_capacity(q + 1);
        for i in 0..=q {
            let map = self.ctx.face_map(q, i)?;
            let images = coords
                .basis
                .iter()
                .map(|m| target.to_vector(&map.apply(&m.clone().into())))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::structural(format!("face d_{i} leaves its slice: {e}")))?;
            faces.push(images);
        }
        let td = target.dim();
        let mut higher = BitMatrix::zeros(0, dim);
        for images in &faces[1..] {
            higher = higher.vstack(&BitMatrix::from_columns(td, images))?;
        }
        let normalized = higher.kernel();
        let all = BitMatrix::from_columns(td, &faces[0]).vstack(&higher)?;
        let cycles = all.kernel();
        Ok(BidegreeSlice {
            coords,
            faces,
            target_dim: td,
            normalized,
            cycles,
        })
    }

    pub fn normalized_basis(&self, q: usize, t: u32) -> Result<Subspace> {
        Ok(self.slice(q, t)?.normalized.clone())
    }

    /// `d_0(N_{q+1})` in the `(q, t)` coordinates.
    pub fn boundaries(&self, q: usize, t: u32) -> Result<Subspace> {
        let above = self.slice(q + 1, t)?;
        let here = self.coordinates(q, t).dim();
        Ok(Subspace::span(
            here,
            above
                .normalized
                .basis()
                .iter()
                .map(|v| above.apply_face(0, v)),
        ))
    }

    pub fn homology_at(&self, q: usize, t: u32) -> Result<HomologyCell> {
        let slice = self.slice(q, t)?;
        let quotient = slice.cycles.quotient(&self.boundaries(q, t)?)?;
        Ok(HomologyCell {
            q,
            t,
            dim: quotient.dim(),
            representatives: quotient
                .representatives
                .iter()
                .map(|v| slice.coords.to_element(v))
                .collect(),
        })
    }

    pub fn homology_dim(&self, q: usize, t: u32) -> Result<usize> {
        let slice = self.slice(q, t)?;
        let b = self.boundaries(q, t)?;
        if !b.is_subspace_of(&slice.cycles) {
            return Err(Error::structural(format!(
                "d0 of a normalized chain is not a cycle at (q={q}, t={t})"
            )));
        }
        Ok(slice.cycles.dim() - b.dim())
    }

    /// Degree of a nonzero element, or `None` for zero.
    fn homogeneous_degree(&self, z: &AlgebraElement) -> Result<Option<u32>> {
        match z.internal_degree(self.ctx.grading()) {
            Degree::Zero => Ok(None),
            Degree::Pure(t) => Ok(Some(t)),
            Degree::Mixed(ts) => Err(Error::usage(format!(
                "element {z} is not homogeneous: degrees {ts:?}"
            ))),
        }
    }

    fn normalized_vector(
        &self,
        z: &AlgebraElement,
    ) -> Result<Option<(Arc<BidegreeSlice>, BitRow)>> {
        let Some(t) = self.homogeneous_degree(z)? else {
            return Ok(None);
        };
        let slice = self.slice(z.level(), t)?;
        let v = slice.coords.to_vector(z)?;
        if !slice.normalized.contains(&v) {
            return Err(Error::usage(format!("{z} is not a normalized chain")));
        }
        Ok(Some((slice, v)))
    }

    pub fn is_normalized(&self, z: &AlgebraElement) -> Result<bool> {
        match self.normalized_vector(z) {
            Ok(_) => Ok(true),
            Err(Error::Usage(msg)) if msg.ends_with("is not a normalized chain") => Ok(false),
            Err(e) => Err(e),
        }
    }

    pub fn is_cycle(&self, z: &AlgebraElement) -> Result<bool> {
        Ok(match self.normalized_vector(z)? {
            None => true,
            Some((slice, v)) => slice.cycles.contains(&v),
        })
    }

    pub fn is_boundary(&self, z: &AlgebraElement) -> Result<bool> {
        Ok(match self.normalized_vector(z)? {
            None => true,
            Some((slice, v)) => self
                .boundaries(slice.coords.q, slice.coords.t)?
                .contains(&v),
        })
    }

    /// Coordinates of the class of a normalized cycle in the basis of
    /// [`HomologyCell::representatives`] for its slice. Zero has no slice and
    /// gets an empty coordinate list.
    pub fn class_of(&self, z: &AlgebraElement) -> Result<Vec<usize>> {
        let Some((slice, v)) = self.normalized_vector(z)? else {
            return Ok(Vec::new());
        };
        if !slice.cycles.contains(&v) {
            return Err(Error::usage(format!("{z} is not a cycle")));
        }
        let (q, t) = (slice.coords.q, slice.coords.t);
        let cell = self.homology_at(q, t)?;
        let reps: Vec<BitRow> = cell
            .representatives
            .iter()
            .map(|r| slice.coords.to_vector(r))
            .collect::<Result<_>>()?;
        let mut generators = reps.clone();
        generators.extend(self.boundaries(q, t)?.basis().iter().cloned());
        let used = express(&generators, &v)
            .ok_or_else(|| Error::structural(format!("cycle {z} outside cycles/boundaries")))?;
        Ok(used.into_iter().filter(|&k| k < reps.len()).collect())
    }

    /// `d_0` of a chain, as an element one level down.
    pub fn d0(&self, z: &AlgebraElement) -> Result<AlgebraElement> {
        self.ctx.face(0, z)
    }

    /// All cells with `q ≤ max_q`, `t ≤ max_t`, computed in parallel.
    pub fn table(&self, max_q: usize, max_t: u32) -> Result<HomologyTable> {
        let keys: Vec<SliceKey> = (0..=max_q)
            .flat_map(|q| (0..=max_t).map(move |t| (q, t)))
            .collect();
        let cells = keys
            .par_iter()
            .map(|&(q, t)| self.homology_at(q, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(HomologyTable {
            grading: *self.grading(),
            cells: cells.into_iter().map(|c| ((c.q, c.t), c)).collect(),
        })
    }
}

/// Homology cells keyed by `(q, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyTable {
    pub grading: GradingSpec,
    pub cells: BTreeMap<(usize, u32), HomologyCell>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyRecord {
    pub q: usize,
    pub t: u32,
    pub dim: usize,
    pub representatives: Vec<String>,
}

impl HomologyTable {
    pub fn empty(grading: GradingSpec) -> Self {
        Self {
            grading,
            cells: BTreeMap::new(),
        }
    }

    pub fn get(&self, q: usize, t: u32) -> Option<&HomologyCell> {
        self.cells.get(&(q, t))
    }

    /// Sum of `dim` over all stored `t` at level `q`.
    pub fn total_dim(&self, q: usize) -> usize {
        self.cells
            .range((q, 0)..=(q, u32::MAX))
            .map(|(_, c)| c.dim)
            .sum()
    }

    pub fn records(&self, include_zero: bool) -> Vec<HomologyRecord> {
        self.cells
            .values()
            .filter(|c| include_zero || c.dim > 0)
            .map(|c| HomologyRecord {
                q: c.q,
                t: c.t,
                dim: c.dim,
                representatives: c.representatives.iter().map(|r| r.to_string()).collect(),
            })
            .collect()
    }

    /// One line per nonzero cell: `q`, `t`, `dim`, representatives joined by `; `.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("q\tt\tdim\trepresentatives\n");
        for r in self.records(false) {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                r.q,
                r.t,
                r.dim,
                r.representatives.join("; ")
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.records(false)).expect("records serialize")
    }
}

/// Basis element `v^e γ_i x^a dx^ε` of the Koszul-type complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct KoszulTerm {
    v: bool,
    gamma: usize,
    x: u32,
    dx: bool,
}

fn koszul_basis(g: &GradingSpec, q: usize, t: u32) -> Vec<KoszulTerm> {
    let yd = u64::from(g.y_degree());
    let mut out = Vec::new();
    for v in [false, true] {
        let Some(gamma) = q.checked_sub(usize::from(v)) else {
            continue;
        };
        for dx in [false, true] {
            let fixed = u64::from(v) * yd
                + gamma as u64 * (yd - 1)
                + u64::from(dx) * u64::from(g.dx_degree());
            let Some(rest) = u64::from(t).checked_sub(fixed) else {
                continue;
            };
            if rest % u64::from(g.m) == 0 {
                out.push(KoszulTerm {
                    v,
                    gamma,
                    x: (rest / u64::from(g.m)) as u32,
                    dx,
                });
            }
        }
    }
    out
}

/// `∂` on a basis element: `∂v = x^{n+1}`, `∂γ_i = (n+1)γ_{i-1} x^n dx`,
/// extended as an `Ω(F₂[x])`-linear derivation.
fn koszul_boundary(g: &GradingSpec, b: KoszulTerm) -> Vec<KoszulTerm> {
    let mut out = Vec::new();
    if b.v {
        out.push(KoszulTerm {
            v: false,
            x: b.x + g.n + 1,
            ..b
        });
    }
    let n_plus_one_odd = g.n.is_multiple_of(2);
    if n_plus_one_odd && b.gamma >= 1 && !b.dx {
        out.push(KoszulTerm {
            gamma: b.gamma - 1,
            x: b.x + g.n,
            dx: true,
            ..b
        });
    }
    out
}

fn koszul_rank(g: &GradingSpec, q: usize, t: u32) -> usize {
    if q == 0 {
        return 0;
    }
    let source = koszul_basis(g, q, t);
    let target = koszul_basis(g, q - 1, t);
    let index: HashMap<KoszulTerm, usize> =
        target.iter().enumerate().map(|(k, b)| (*b, k)).collect();
    let rows = source.iter().map(|&b| {
        let mut row = BitRow::zeros(target.len());
        for img in koszul_boundary(g, b) {
            row.flip(index[&img]);
        }
        row
    });
    BitMatrix::from_rows(target.len(), rows.collect()).rank()
}

/// Dimension of `H_q` in internal degree `t` of `Λ(v) ⊗ Γ[w] ⊗ Ω(F₂[x])`.
/// Independent of the simplicial computation.
pub fn koszul_dim(g: &GradingSpec, q: usize, t: u32) -> usize {
    koszul_basis(g, q, t).len() - koszul_rank(g, q, t) - koszul_rank(g, q + 1, t)
}
