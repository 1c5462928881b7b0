//! The Thom-space side: Thom modules of multiples of the tangent bundle,
//! the cofibers `C_q(M)` of `T(qτ) → T((q+1)τ)`, and the assembled
//! `CT(M) = M_+ ∨ ⋁_q Σ^{(r−2)(q+1)} C_q(M)` in mod-2 cohomology and
//! integral homology. Also carries the integral reference homology of `ΛM`
//! and the splitting of `ΛS^m`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::closedform::lucas;
use crate::error::{Error, Result};
use crate::steenrod::{ClassSpec, FiniteAModule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    ComplexProjective(u32),
    QuaternionicProjective(u32),
    CayleyPlane,
    Sphere(u32),
}

/// A space with `H*(M; ℤ) = ℤ[x]/(x^{n+1})`, `|x| = r`, of dimension `d = rn`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpaceDescriptor {
    pub kind: SpaceKind,
    pub n: u32,
    pub r: u32,
    pub d: u32,
    /// Euler characteristic.
    pub chi: u32,
}

impl SpaceDescriptor {
    pub fn cp(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::usage("CP^n needs n >= 1"));
        }
        Ok(Self {
            kind: SpaceKind::ComplexProjective(n),
            n,
            r: 2,
            d: 2 * n,
            chi: n + 1,
        })
    }

    pub fn hp(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::usage("HP^n needs n >= 1"));
        }
        Ok(Self {
            kind: SpaceKind::QuaternionicProjective(n),
            n,
            r: 4,
            d: 4 * n,
            chi: n + 1,
        })
    }

    pub fn cayley() -> Self {
        Self {
            kind: SpaceKind::CayleyPlane,
            n: 2,
            r: 8,
            d: 16,
            chi: 3,
        }
    }

    pub fn sphere(m: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::usage("S^m needs m >= 2"));
        }
        let chi = if m.is_multiple_of(2) { 2 } else { 0 };
        Ok(Self {
            kind: SpaceKind::Sphere(m),
            n: 1,
            r: m,
            d: m,
            chi,
        })
    }

    /// The spaces every batch check runs over.
    pub fn shipped() -> Vec<Self> {
        let mut out = Vec::new();
        out.extend((1..=4).map(|n| Self::cp(n).unwrap()));
        out.extend((1..=3).map(|n| Self::hp(n).unwrap()));
        out.push(Self::cayley());
        out.extend((2..=6).map(|m| Self::sphere(m).unwrap()));
        out
    }

    pub fn name(&self) -> String {
        match self.kind {
            SpaceKind::ComplexProjective(n) => format!("cp{n}"),
            SpaceKind::QuaternionicProjective(n) => format!("hp{n}"),
            SpaceKind::CayleyPlane => "cayley".into(),
            SpaceKind::Sphere(m) => format!("s{m}"),
        }
    }

    pub fn is_sphere(&self) -> bool {
        matches!(self.kind, SpaceKind::Sphere(_))
    }

    /// The suspension applied to `C_q` inside `CT(M)`.
    pub fn cofiber_shift(&self, q: u32) -> u32 {
        (self.r - 2) * (q + 1)
    }
}

impl fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for SpaceDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let num = |rest: &str| {
            rest.parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad space parameter in {s:?}")))
        };
        if s == "cayley" {
            Ok(Self::cayley())
        } else if let Some(rest) = s.strip_prefix("cp") {
            Self::cp(num(rest)?)
        } else if let Some(rest) = s.strip_prefix("hp") {
            Self::hp(num(rest)?)
        } else if let Some(rest) = s.strip_prefix('s') {
            Self::sphere(num(rest)?)
        } else {
            Err(Error::Parse(format!(
                "unknown space {s:?}; expected cp<k>, hp<k>, cayley or s<k>"
            )))
        }
    }
}

/// A finitely generated abelian group `ℤ^free ⊕ ⊕ ℤ/t`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct AbelianGroup {
    pub free_rank: u32,
    /// Orders of cyclic torsion summands, sorted, each at least 2.
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            k => parts.push(format!("Z^{k}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join("+"))
        }
    }
}

/// Groups indexed by degree; absent degrees are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedAbelianGroups {
    groups: BTreeMap<u32, AbelianGroup>,
}

impl GradedAbelianGroups {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_free(&mut self, k: u32, rank: u32) {
        if rank > 0 {
            self.groups.entry(k).or_default().free_rank += rank;
        }
    }

    /// Adds a `ℤ/order` summand; order 1 is the trivial group.
    pub fn add_torsion(&mut self, k: u32, order: u64) -> Result<()> {
        match order {
            0 => Err(Error::usage(format!("Z/0 requested in degree {k}"))),
            1 => Ok(()),
            _ => {
                let g = self.groups.entry(k).or_default();
                let at = g.torsion.partition_point(|&t| t <= order);
                g.torsion.insert(at, order);
                Ok(())
            }
        }
    }

    pub fn get(&self, k: u32) -> AbelianGroup {
        self.groups.get(&k).cloned().unwrap_or_default()
    }

    pub fn shifted(&self, s: u32) -> Self {
        Self {
            groups: self
                .groups
                .iter()
                .map(|(k, g)| (k + s, g.clone()))
                .collect(),
        }
    }

    pub fn absorb(&mut self, other: &GradedAbelianGroups) {
        for (&k, g) in &other.groups {
            self.add_free(k, g.free_rank);
            for &t in &g.torsion {
                self.add_torsion(k, t)
                    .expect("stored orders are at least 2");
            }
        }
    }

    pub fn truncated(&self, deg_max: u32) -> Self {
        Self {
            groups: self
                .groups
                .range(..=deg_max)
                .map(|(k, g)| (*k, g.clone()))
                .collect(),
        }
    }

    /// Nonzero degrees in increasing order.
    pub fn degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.groups.keys().copied()
    }

    /// `degree<TAB>freeRank<TAB>torsion` for every degree up to `deg_max`,
    /// torsion as comma-separated orders or `-`.
    pub fn to_tsv(&self, deg_max: u32) -> String {
        let mut out = String::from("degree\tfreeRank\ttorsion\n");
        for k in 0..=deg_max {
            let g = self.get(k);
            let torsion = if g.torsion.is_empty() {
                "-".to_string()
            } else {
                g.torsion
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            };
            out.push_str(&format!("{k}\t{}\t{torsion}\n", g.free_rank));
        }
        out
    }
}

/// `w(qτ) = (1+x)^{q(n+1)}` truncated at `x^n`: entry `i` is the coefficient of `x^i`.
pub fn sw_total(space: &SpaceDescriptor, q: u32) -> Vec<bool> {
    let e = u64::from(q) * u64::from(space.n + 1);
    (0..=space.n).map(|i| lucas(e, u64::from(i))).collect()
}

/// The multiplier by which the zero section acts on top classes.
pub fn euler_restriction(space: &SpaceDescriptor) -> u32 {
    space.chi
}

fn power_label(j: u32, rest: &str) -> String {
    match j {
        0 => rest.to_string(),
        1 => format!("x*{rest}"),
        _ => format!("x^{j}*{rest}"),
    }
}

/// A summand under construction: classes with degrees and the explicit
/// nonzero `Sq^k` values `(k, target)` per class.
#[derive(Clone, Debug, Default)]
struct Piece {
    classes: Vec<ClassSpec>,
    ops: Vec<Vec<(u32, usize)>>,
}

impl Piece {
    fn push(&mut self, label: String, degree: u32) -> usize {
        self.classes.push(ClassSpec::new(label, degree));
        self.ops.push(Vec::new());
        self.classes.len() - 1
    }

    fn op(&mut self, from: usize, k: u32, to: usize) {
        self.ops[from].push((k, to));
    }

    fn shift(mut self, s: u32) -> Self {
        for c in &mut self.classes {
            c.degree += s;
        }
        self
    }

    fn append(&mut self, other: Piece) {
        let offset = self.classes.len();
        self.classes.extend(other.classes);
        self.ops.extend(
            other
                .ops
                .into_iter()
                .map(|v| v.into_iter().map(|(k, t)| (k, t + offset)).collect()),
        );
    }

    fn into_module(
        self,
        name: String,
        deg_max: u32,
        product: Option<&dyn Fn(usize, usize) -> Vec<usize>>,
    ) -> Result<FiniteAModule> {
        let sq = |k: u32, c: usize| -> Vec<usize> {
            self.ops[c]
                .iter()
                .filter(|(kk, _)| *kk == k)
                .map(|(_, t)| *t)
                .collect()
        };
        FiniteAModule::build(name, deg_max, &self.classes, &sq, product)
    }
}

/// Classes `x^j · base`, `j ∈ js`, with `Sq^{ri}(x^j base) = C(e+j, i) x^{i+j} base`.
/// Returns the piece and the index of each `j`.
fn truncated_orbit(
    piece: &mut Piece,
    r: u32,
    e: u64,
    js: std::ops::Range<u32>,
    label: impl Fn(u32) -> String,
    degree: impl Fn(u32) -> u32,
) -> Vec<usize> {
    let idx: Vec<usize> = js
        .clone()
        .map(|j| piece.push(label(j), degree(j)))
        .collect();
    for (a, j) in js.clone().enumerate() {
        for (b, jj) in js.clone().enumerate().skip(a + 1) {
            let i = jj - j;
            if lucas(e + u64::from(j), u64::from(i)) {
                piece.op(idx[a], r * i, idx[b]);
            }
        }
    }
    idx
}

fn thom_piece(space: &SpaceDescriptor, q: u32) -> Piece {
    let mut p = Piece::default();
    let e = u64::from(q) * u64::from(space.n + 1);
    let base = format!("u{q}");
    truncated_orbit(
        &mut p,
        space.r,
        e,
        0..space.n + 1,
        |j| power_label(j, &base),
        |j| space.r * j + q * space.d,
    );
    p
}

/// `H̃*(T(qτ))`: classes `x^j u_q` in degree `rj + qd`, with the Thom-class
/// product `u_q² = w_{qd}(qτ) u_q`.
pub fn thom_module(space: &SpaceDescriptor, q: u32, deg_max: u32) -> Result<FiniteAModule> {
    let n = space.n;
    let top = lucas(u64::from(q) * u64::from(n + 1), u64::from(q) * u64::from(n));
    let product = |a: usize, b: usize| -> Vec<usize> {
        let j = a as u32 + b as u32 + q * n;
        if top && j <= n {
            vec![j as usize]
        } else {
            vec![]
        }
    };
    thom_piece(space, q).into_module(
        format!("T({q}tau {})", space.name()),
        deg_max,
        Some(&product),
    )
}

fn cofiber_piece(space: &SpaceDescriptor, q: u32) -> Result<Piece> {
    if space.chi == 0 {
        return Err(Error::usage(format!(
            "{} has Euler characteristic 0; its cofibers come from sphere_cq",
            space.name()
        )));
    }
    let (n, r, d) = (space.n, space.r, space.d);
    let below = u64::from(q) * u64::from(n + 1);
    let above = u64::from(q + 1) * u64::from(n + 1);
    let mut p = Piece::default();
    if space.chi % 2 == 1 {
        // s* is onto the top class: a_q^j = δ(x^j u_q) for j < n and
        // b_{q+1}^j = x^{j+1} u_{q+1} survive.
        truncated_orbit(
            &mut p,
            r,
            below,
            0..n,
            |j| format!("a{q}^{j}"),
            |j| r * j + q * d + 1,
        );
        truncated_orbit(
            &mut p,
            r,
            above + 1,
            0..n,
            |j| format!("b{}^{j}", q + 1),
            |j| r * (j + 1) + (q + 1) * d,
        );
    } else {
        // s* vanishes mod 2: both Thom modules survive whole.
        let c = truncated_orbit(
            &mut p,
            r,
            below,
            0..n + 1,
            |j| format!("c{q}^{j}"),
            |j| r * j + q * d + 1,
        );
        let dd = truncated_orbit(
            &mut p,
            r,
            above,
            0..n + 1,
            |j| format!("d{}^{j}", q + 1),
            |j| r * j + (q + 1) * d,
        );
        if space.chi % 4 == 2 {
            p.op(dd[0], 1, c[n as usize]);
        }
    }
    Ok(p.shift(space.cofiber_shift(q)))
}

/// `H̃*(Σ^{(r−2)(q+1)} C_q(M); F₂)`. Requires `χ(M) ≠ 0`.
pub fn cofiber_f2(space: &SpaceDescriptor, q: u32, deg_max: u32) -> Result<FiniteAModule> {
    cofiber_piece(space, q)?.into_module(format!("C{q}({})", space.name()), deg_max, None)
}

/// Whether `Sq¹` links `d_{q+1}^0` to `c_q^n` in the cofiber (`n` odd only).
pub fn cofiber_sq1(space: &SpaceDescriptor) -> Option<bool> {
    (space.n % 2 == 1).then_some(space.chi % 4 == 2)
}

/// `H̃_*(C_q(M); ℤ)`, unsuspended. Requires `χ(M) ≠ 0`.
pub fn cofiber_z(space: &SpaceDescriptor, q: u32) -> Result<GradedAbelianGroups> {
    if space.chi == 0 {
        return Err(Error::usage(format!(
            "{} has Euler characteristic 0; its cofibers come from sphere_cq",
            space.name()
        )));
    }
    let (n, r, d) = (space.n, space.r, space.d);
    let mut g = GradedAbelianGroups::new();
    for j in 0..n {
        g.add_free(q * d + 1 + j * r, 1);
        g.add_free((q + 1) * d + (j + 1) * r, 1);
    }
    g.add_torsion((q + 1) * d, u64::from(space.chi))?;
    Ok(g)
}

/// A stable cell complex of one of the two kinds appearing here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum StableCell {
    Sphere(u32),
    /// `M(ℤ/2, k)`: reduced homology `ℤ/2` in degree `k`.
    Moore2(u32),
}

impl StableCell {
    pub fn homology(&self) -> GradedAbelianGroups {
        let mut g = GradedAbelianGroups::new();
        match *self {
            StableCell::Sphere(k) => g.add_free(k, 1),
            StableCell::Moore2(k) => g.add_torsion(k, 2).expect("2 is a valid order"),
        }
        g
    }
}

impl fmt::Display for StableCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StableCell::Sphere(k) => write!(f, "S^{k}"),
            StableCell::Moore2(k) => write!(f, "M(Z/2,{k})"),
        }
    }
}

/// `Σ^{(m−2)(q+1)} C_q(S^m)` as a wedge of cells.
pub fn sphere_cq(m: u32, q: u32) -> Result<Vec<StableCell>> {
    if m < 2 {
        return Err(Error::usage(format!("S^m needs m >= 2, got {m}")));
    }
    let low = (2 * q + 1) * (m - 1);
    let high = 2 * (q + 1) * (m - 1);
    Ok(if m % 2 == 1 {
        vec![
            StableCell::Sphere(high),
            StableCell::Sphere(high + m),
            StableCell::Sphere(low),
            StableCell::Sphere(high + 1),
        ]
    } else {
        vec![
            StableCell::Moore2(high),
            StableCell::Sphere(high + m),
            StableCell::Sphere(low),
        ]
    })
}

/// Mod-2 cohomology of `sphere_cq`, with classes named like the cofiber
/// classes of the same degree.
fn sphere_cq_piece(m: u32, q: u32) -> Result<Piece> {
    let names = [
        (format!("c{q}^0"), (2 * q + 1) * (m - 1)),
        (format!("c{q}^1"), (2 * q + 1) * (m - 1) + m),
        (format!("d{}^0", q + 1), 2 * (q + 1) * (m - 1)),
        (format!("d{}^1", q + 1), 2 * (q + 1) * (m - 1) + m),
    ];
    let name_of = |deg: u32| -> Result<String> {
        names
            .iter()
            .find(|(_, d)| *d == deg)
            .map(|(l, _)| l.clone())
            .ok_or_else(|| Error::structural(format!("no cofiber class in degree {deg}")))
    };
    let mut p = Piece::default();
    for cell in sphere_cq(m, q)? {
        match cell {
            StableCell::Sphere(k) => {
                p.push(name_of(k)?, k);
            }
            StableCell::Moore2(k) => {
                let bottom = p.push(name_of(k)?, k);
                let top = p.push(name_of(k + 1)?, k + 1);
                p.op(bottom, 1, top);
            }
        }
    }
    Ok(p)
}

/// `D_k(S^{m−1})` in the stable splitting of `ΛS^m`.
pub fn dk_summand(m: u32, k: u32) -> Result<Vec<StableCell>> {
    if m < 2 || k == 0 {
        return Err(Error::usage(format!(
            "D_k needs m >= 2 and k >= 1, got m={m}, k={k}"
        )));
    }
    let base = (m - 1) * k;
    Ok(if m.is_multiple_of(2) && k.is_multiple_of(2) {
        vec![StableCell::Moore2(base)]
    } else {
        vec![StableCell::Sphere(base), StableCell::Sphere(base + 1)]
    })
}

/// Integral homology of `S^0 ∨ ⋁_{k≥1} D_k(S^{m−1})` up to `deg_max`.
pub fn sphere_splitting_z(m: u32, deg_max: u32) -> Result<GradedAbelianGroups> {
    let mut g = StableCell::Sphere(0).homology();
    for k in 1..=deg_max {
        for cell in dk_summand(m, k)? {
            g.absorb(&cell.homology());
        }
    }
    Ok(g.truncated(deg_max))
}

fn first_cofiber_degree(space: &SpaceDescriptor, q: u32) -> u32 {
    q * space.d + 1 + space.cofiber_shift(q)
}

fn m_plus_piece(space: &SpaceDescriptor) -> Piece {
    let mut p = Piece::default();
    let label = |j: u32| match j {
        0 => "1".to_string(),
        1 => "x".to_string(),
        _ => format!("x^{j}"),
    };
    truncated_orbit(&mut p, space.r, 0, 0..space.n + 1, label, |j| space.r * j);
    p
}

/// `H̃*(CT(M); F₂)` up to `deg_max`.
pub fn ct_assemble_f2(space: &SpaceDescriptor, deg_max: u32) -> Result<FiniteAModule> {
    let mut p = m_plus_piece(space);
    let mut q = 0;
    while first_cofiber_degree(space, q) <= deg_max {
        let piece = match space.kind {
            SpaceKind::Sphere(m) if space.chi == 0 => sphere_cq_piece(m, q)?,
            _ => cofiber_piece(space, q)?,
        };
        p.append(piece);
        q += 1;
    }
    p.into_module(format!("CT({})", space.name()), deg_max, None)
}

/// `H̃_*(CT(M); ℤ)` up to `deg_max`.
pub fn ct_assemble_z(space: &SpaceDescriptor, deg_max: u32) -> Result<GradedAbelianGroups> {
    let mut g = GradedAbelianGroups::new();
    for j in 0..=space.n {
        g.add_free(space.r * j, 1);
    }
    let mut q = 0;
    while first_cofiber_degree(space, q) <= deg_max {
        match space.kind {
            SpaceKind::Sphere(m) if space.chi == 0 => {
                for cell in sphere_cq(m, q)? {
                    g.absorb(&cell.homology());
                }
            }
            _ => g.absorb(&cofiber_z(space, q)?.shifted(space.cofiber_shift(q))),
        }
        q += 1;
    }
    Ok(g.truncated(deg_max))
}

/// Homology of the Cayley plane's first critical manifold, `T_1 CaP²`.
const CAYLEY_T1_FREE: [u32; 4] = [0, 8, 23, 31];
const CAYLEY_T1_TORSION: (u32, u64) = (15, 3);
/// Index of the `m`-th critical manifold is `22m − 15`.
const CAYLEY_PERIOD: u32 = 22;
const CAYLEY_INDEX_OFFSET: u32 = 15;

/// Reference integral homology `H_*(ΛM; ℤ)` up to `deg_max`.
pub fn ziller_loop_z_table(space: &SpaceDescriptor, deg_max: u32) -> GradedAbelianGroups {
    let mut g = GradedAbelianGroups::new();
    let torsion = |g: &mut GradedAbelianGroups, k: u32, t: u64| {
        g.add_torsion(k, t)
            .expect("reference orders are at least 2")
    };
    match space.kind {
        SpaceKind::ComplexProjective(n) => {
            for k in 0..=deg_max {
                g.add_free(k, 1);
                if k > 0 && k % (2 * n) == 0 {
                    torsion(&mut g, k, u64::from(n + 1));
                }
            }
        }
        SpaceKind::QuaternionicProjective(n) => {
            let period = 4 * n + 2;
            g.add_free(0, 1);
            for j in 0..=deg_max / period {
                for l in 1..=n {
                    g.add_free(period * j + 4 * l, 1);
                }
                for l in 0..n {
                    g.add_free(period * j + 3 + 4 * l, 1);
                }
                if j >= 1 {
                    torsion(&mut g, period * j, u64::from(n + 1));
                }
            }
        }
        SpaceKind::CayleyPlane => {
            for k in [0, 8, 16] {
                g.add_free(k, 1);
            }
            for j in 1..=deg_max / CAYLEY_PERIOD + 1 {
                let index = CAYLEY_PERIOD * j - CAYLEY_INDEX_OFFSET;
                for k in CAYLEY_T1_FREE {
                    g.add_free(index + k, 1);
                }
                torsion(&mut g, index + CAYLEY_T1_TORSION.0, CAYLEY_T1_TORSION.1);
            }
        }
        SpaceKind::Sphere(m) => {
            g.add_free(0, 1);
            g.add_free(m, 1);
            for j in 1..=deg_max / (m - 1) + 1 {
                if m % 2 == 0 {
                    g.add_free((2 * j - 1) * (m - 1), 1);
                    g.add_free(2 * j * (m - 1) + m, 1);
                    torsion(&mut g, 2 * j * (m - 1), 2);
                } else {
                    g.add_free(j * (m - 1), 1);
                    g.add_free(j * (m - 1) + m, 1);
                }
            }
        }
    }
    g.truncated(deg_max)
}

/// Reference `H_k(ΛM; ℤ)`.
pub fn ziller_loop_z(space: &SpaceDescriptor, k: u32) -> AbelianGroup {
    ziller_loop_z_table(space, k).get(k)
}

/// Degrees `≤ deg_max` in which the reference predicts a nonzero `Sq¹` out
/// of `H^t(ΛM; F₂)`, read off from where the 2-torsion of `H_*(ΛM; ℤ)`
/// sits: a `ℤ/2^e` summand in degree `k` gives `Sq¹` from degree `k` exactly
/// when `e = 1`.
pub fn ziller_sq1_degrees(space: &SpaceDescriptor, deg_max: u32) -> Vec<u32> {
    let table = ziller_loop_z_table(space, deg_max + 1);
    table
        .degrees()
        .filter(|&k| k <= deg_max)
        .filter(|&k| {
            table
                .get(k)
                .torsion
                .iter()
                .any(|&t| t % 2 == 0 && t % 4 != 0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steenrod::{check_adem, check_cartan, check_instability};

    #[test]
    fn parse_spaces() {
        assert_eq!(
            "cp3".parse::<SpaceDescriptor>().unwrap(),
            SpaceDescriptor::cp(3).unwrap()
        );
        assert_eq!("cayley".parse::<SpaceDescriptor>().unwrap().chi, 3);
        assert_eq!("s5".parse::<SpaceDescriptor>().unwrap().chi, 0);
        assert!("s1".parse::<SpaceDescriptor>().is_err());
        assert!("rp2".parse::<SpaceDescriptor>().is_err());
        for s in SpaceDescriptor::shipped() {
            assert_eq!(s.name().parse::<SpaceDescriptor>().unwrap(), s);
            assert_eq!(s.d, s.r * s.n);
        }
    }

    #[test]
    fn stiefel_whitney_examples() {
        let cp2 = SpaceDescriptor::cp(2).unwrap();
        assert_eq!(sw_total(&cp2, 0), vec![true, false, false]);
        assert_eq!(sw_total(&cp2, 1), vec![true, true, true]);
        for m in 2..7 {
            for q in 0..5 {
                assert_eq!(
                    sw_total(&SpaceDescriptor::sphere(m).unwrap(), q),
                    vec![true, false]
                );
            }
        }
    }

    #[test]
    fn euler_examples() {
        assert_eq!(euler_restriction(&SpaceDescriptor::cp(3).unwrap()), 4);
        assert_eq!(euler_restriction(&SpaceDescriptor::cayley()), 3);
        assert_eq!(euler_restriction(&SpaceDescriptor::sphere(4).unwrap()), 2);
        assert_eq!(euler_restriction(&SpaceDescriptor::sphere(5).unwrap()), 0);
    }

    #[test]
    fn thom_module_examples() {
        let cp2 = SpaceDescriptor::cp(2).unwrap();
        let t = thom_module(&cp2, 1, 60).unwrap();
        let u = t.find("u1").unwrap();
        assert_eq!(u.0, 4);
        assert_eq!(
            t.apply_sq(2, 4, &t.unit_vector(u)).unwrap(),
            t.unit_vector(t.find("x*u1").unwrap())
        );
        let s = SpaceDescriptor::sphere(5).unwrap();
        let ts = thom_module(&s, 2, 60).unwrap();
        let u = ts.find("u2").unwrap();
        for k in 1..5 {
            assert!(ts.apply_sq(k, u.0, &ts.unit_vector(u)).unwrap().is_zero());
        }
        for space in SpaceDescriptor::shipped() {
            for q in 0..3 {
                let t = thom_module(&space, q, 80).unwrap();
                assert!(check_instability(&t).pass, "{space} q={q}");
                assert!(check_cartan(&t, 16).unwrap().pass, "{space} q={q}");
                assert!(check_adem(&t, 16).pass, "{space} q={q}");
            }
        }
    }

    #[test]
    fn cofiber_examples() {
        let cp2 = SpaceDescriptor::cp(2).unwrap();
        let c = cofiber_f2(&cp2, 1, 40).unwrap();
        let degree = |l: &str| c.find(l).unwrap().0;
        assert_eq!(
            [
                degree("a1^0"),
                degree("a1^1"),
                degree("b2^0"),
                degree("b2^1")
            ],
            [5, 7, 10, 12]
        );
        assert_eq!(c.total_dim(), 4);

        let hp1 = SpaceDescriptor::hp(1).unwrap();
        let c = cofiber_f2(&hp1, 0, 40).unwrap();
        let d = c.find("d1^0").unwrap();
        assert_eq!(
            c.apply_sq(1, d.0, &c.unit_vector(d)).unwrap(),
            c.unit_vector(c.find("c0^1").unwrap())
        );

        let cp3 = SpaceDescriptor::cp(3).unwrap();
        let c = cofiber_f2(&cp3, 0, 40).unwrap();
        let d = c.find("d1^0").unwrap();
        assert!(c.apply_sq(1, d.0, &c.unit_vector(d)).unwrap().is_zero());

        assert!(cofiber_f2(&SpaceDescriptor::sphere(3).unwrap(), 0, 40).is_err());
        assert!(cofiber_z(&SpaceDescriptor::sphere(3).unwrap(), 0).is_err());
    }

    #[test]
    fn cofiber_z_examples() {
        let g = cofiber_z(&SpaceDescriptor::cp(2).unwrap(), 1).unwrap();
        let free: Vec<u32> = g.degrees().filter(|&k| g.get(k).free_rank > 0).collect();
        assert_eq!(free, vec![5, 7, 10, 12]);
        assert_eq!(g.get(8).torsion, vec![3]);
        assert_eq!(
            cofiber_z(&SpaceDescriptor::cayley(), 0)
                .unwrap()
                .get(16)
                .torsion,
            vec![3]
        );
        let h = cofiber_z(&SpaceDescriptor::hp(1).unwrap(), 0).unwrap();
        assert_eq!(h.degrees().collect::<Vec<_>>(), vec![1, 4, 8]);
        assert_eq!(h.get(4).torsion, vec![2]);
    }

    #[test]
    fn cofiber_z_bookkeeping() {
        for space in SpaceDescriptor::shipped()
            .into_iter()
            .filter(|s| s.chi != 0)
        {
            for q in 0..4 {
                let g = cofiber_z(&space, q).unwrap();
                let top = (q + 2) * space.d;
                let free: u32 = (0..=top).map(|k| g.get(k).free_rank).sum();
                let torsion: usize = (0..=top).map(|k| g.get(k).torsion.len()).sum();
                assert_eq!(free, 2 * (space.n + 1) - 2);
                assert_eq!(torsion, 1);
            }
        }
    }

    #[test]
    fn sphere_cells() {
        use StableCell::*;
        assert_eq!(
            sphere_cq(2, 0).unwrap(),
            vec![Moore2(2), Sphere(4), Sphere(1)]
        );
        assert_eq!(
            sphere_cq(3, 0).unwrap(),
            vec![Sphere(4), Sphere(7), Sphere(2), Sphere(5)]
        );
        assert!(sphere_cq(1, 0).is_err());
        assert_eq!(dk_summand(2, 2).unwrap(), vec![Moore2(2)]);
        assert_eq!(dk_summand(2, 3).unwrap(), vec![Sphere(3), Sphere(4)]);
        assert_eq!(dk_summand(3, 2).unwrap(), vec![Sphere(4), Sphere(5)]);
    }

    #[test]
    fn sphere_cells_match_cofiber_formula_for_even_spheres() {
        for m in [2, 4, 6] {
            let s = SpaceDescriptor::sphere(m).unwrap();
            for q in 0..4 {
                let mut cells = GradedAbelianGroups::new();
                for c in sphere_cq(m, q).unwrap() {
                    cells.absorb(&c.homology());
                }
                assert_eq!(
                    cells,
                    cofiber_z(&s, q).unwrap().shifted(s.cofiber_shift(q)),
                    "m={m} q={q}"
                );
            }
        }
    }

    #[test]
    fn integral_reference_examples() {
        let cp3 = SpaceDescriptor::cp(3).unwrap();
        assert_eq!(ziller_loop_z(&cp3, 12).to_string(), "Z+Z/4");
        assert_eq!(ziller_loop_z(&cp3, 7).to_string(), "Z");
        let cay = SpaceDescriptor::cayley();
        assert_eq!(ziller_loop_z(&cay, 22).to_string(), "Z/3");
        assert_eq!(ziller_loop_z(&cay, 7).to_string(), "Z");
        assert_eq!(ziller_loop_z(&cay, 1).to_string(), "0");
    }

    #[test]
    fn ct_matches_reference_small() {
        for space in SpaceDescriptor::shipped() {
            assert_eq!(
                ct_assemble_z(&space, 120).unwrap(),
                ziller_loop_z_table(&space, 120),
                "{space}"
            );
        }
    }

    #[test]
    fn ct_f2_axioms() {
        for space in SpaceDescriptor::shipped() {
            let ct = ct_assemble_f2(&space, 80).unwrap();
            assert!(check_instability(&ct).pass, "{space}");
            assert!(check_adem(&ct, 16).pass, "{space}");
        }
    }

    #[test]
    fn graded_groups_tsv() {
        let mut g = GradedAbelianGroups::new();
        g.add_free(1, 1);
        g.add_torsion(2, 3).unwrap();
        g.add_torsion(2, 1).unwrap();
        assert!(g.add_torsion(2, 0).is_err());
        assert_eq!(
            g.to_tsv(2),
            "degree\tfreeRank\ttorsion\n0\t0\t-\n1\t1\t-\n2\t0\t3\n"
        );
    }
}
