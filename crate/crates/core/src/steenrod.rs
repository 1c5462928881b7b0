//! Finite graded F₂-modules with explicit `Sq^k` matrices, and checkers for
//! instability, the Cartan formula, the Adem relations, and isomorphism
//! under a basis dictionary.
//!
//! A module only knows its classes up to `deg_max`. Any operation whose
//! value lands above `deg_max` is unknown; checks count such instances as
//! skipped rather than treating them as zero.

use std::borrow::Cow;
use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::closedform::lucas;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitRow};
use crate::report::CheckReport;

/// A basis class: its degree and index within that degree.
pub type ClassId = (u32, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAModule {
    name: String,
    deg_max: u32,
    labels: Vec<Vec<String>>,
    /// `(k, t)` ↦ matrix from degree `t` to `t + k` (columns are sources).
    /// Missing entries with `t + k ≤ deg_max` are zero.
    sq: BTreeMap<(u32, u32), BitMatrix>,
    product: Option<HashMap<(ClassId, ClassId), BitRow>>,
}

/// One class of a module under construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassSpec {
    pub label: String,
    pub degree: u32,
}

impl ClassSpec {
    pub fn new(label: impl Into<String>, degree: u32) -> Self {
        Self {
            label: label.into(),
            degree,
        }
    }
}

type SqRule<'a> = &'a dyn Fn(u32, usize) -> Vec<usize>;
type ProductRule<'a> = &'a dyn Fn(usize, usize) -> Vec<usize>;

impl FiniteAModule {
    /// Builds a module from a class list. `sq(k, c)` lists the classes (as
    /// indices into `classes`) whose sum is `Sq^k` of class `c`, for `k ≥ 1`;
    /// `product(a, b)` likewise. Classes above `deg_max` are dropped, and
    /// rules may not mention them for results inside the range.
    pub fn build(
        name: impl Into<String>,
        deg_max: u32,
        classes: &[ClassSpec],
        sq: SqRule<'_>,
        product: Option<ProductRule<'_>>,
    ) -> Result<Self> {
        let mut labels = vec![Vec::new(); deg_max as usize + 1];
        let mut ids: Vec<Option<ClassId>> = Vec::with_capacity(classes.len());
        let mut seen = std::collections::HashSet::new();
        for c in classes {
            if !seen.insert(c.label.clone()) {
                return Err(Error::structural(format!(
                    "duplicate class label {}",
                    c.label
                )));
            }
            if c.degree <= deg_max {
                let slot = &mut labels[c.degree as usize];
                ids.push(Some((c.degree, slot.len())));
                slot.push(c.label.clone());
            } else {
                ids.push(None);
            }
        }
        let resolve = |targets: Vec<usize>, degree: u32, what: &str| -> Result<BitRow> {
            let mut v = BitRow::zeros(labels[degree as usize].len());
            for c in targets {
                match ids.get(c).copied().flatten() {
                    Some((d, i)) if d == degree => v.flip(i),
                    Some((d, _)) => {
                        return Err(Error::structural(format!(
                            "{what} lands on {} in degree {d}, expected degree {degree}",
                            classes[c].label
                        )))
                    }
                    None => {
                        return Err(Error::structural(format!(
                            "{what} refers to class index {c} outside the range"
                        )))
                    }
                }
            }
            Ok(v)
        };
        let mut sq_mats = BTreeMap::new();
        for k in 1..=deg_max {
            for t in 0..=deg_max - k {
                let src: Vec<usize> = (0..classes.len())
                    .filter(|&c| ids[c].is_some_and(|(d, _)| d == t))
                    .collect();
                if src.is_empty() || labels[(t + k) as usize].is_empty() {
                    continue;
                }
                let mut columns = vec![BitRow::zeros(0); src.len()];
                for &c in &src {
                    let (_, i) = ids[c].unwrap();
                    columns[i] = resolve(sq(k, c), t + k, &format!("Sq^{k} {}", classes[c].label))?;
                }
                let m = BitMatrix::from_columns(labels[(t + k) as usize].len(), &columns);
                if !m.is_zero() {
                    sq_mats.insert((k, t), m);
                }
            }
        }
        let product = match product {
            None => None,
            Some(rule) => {
                let mut table = HashMap::new();
                for (a, ia) in ids.iter().enumerate() {
                    let Some(ia) = *ia else { continue };
                    for (b, ib) in ids.iter().enumerate() {
                        let Some(ib) = *ib else { continue };
                        let t = ia.0 + ib.0;
                        if t > deg_max {
                            continue;
                        }
                        let v = resolve(
                            rule(a, b),
                            t,
                            &format!("{} * {}", classes[a].label, classes[b].label),
                        )?;
                        if !v.is_zero() {
                            table.insert((ia, ib), v);
                        }
                    }
                }
                Some(table)
            }
        };
        Ok(Self {
            name: name.into(),
            deg_max,
            labels,
            sq: sq_mats,
            product,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn deg_max(&self) -> u32 {
        self.deg_max
    }

    pub fn dim(&self, t: u32) -> usize {
        self.labels.get(t as usize).map_or(0, Vec::len)
    }

    pub fn total_dim(&self) -> usize {
        self.labels.iter().map(Vec::len).sum()
    }

    pub fn labels(&self, t: u32) -> &[String] {
        self.labels.get(t as usize).map_or(&[], |v| v.as_slice())
    }

    pub fn label(&self, c: ClassId) -> &str {
        &self.labels[c.0 as usize][c.1]
    }

    pub fn find(&self, label: &str) -> Option<ClassId> {
        self.labels
            .iter()
            .enumerate()
            .find_map(|(t, ls)| ls.iter().position(|l| l == label).map(|i| (t as u32, i)))
    }

    pub fn classes(&self) -> impl Iterator<Item = ClassId> + '_ {
        self.labels
            .iter()
            .enumerate()
            .flat_map(|(t, ls)| (0..ls.len()).map(move |i| (t as u32, i)))
    }

    pub fn has_product(&self) -> bool {
        self.product.is_some()
    }

    /// `Sq^k` from degree `t`, or `None` if the target lies above `deg_max`.
    pub fn sq(&self, k: u32, t: u32) -> Option<Cow<'_, BitMatrix>> {
        if t + k > self.deg_max {
            return None;
        }
        if k == 0 {
            return Some(Cow::Owned(BitMatrix::identity(self.dim(t))));
        }
        Some(match self.sq.get(&(k, t)) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(BitMatrix::zeros(self.dim(t + k), self.dim(t))),
        })
    }

    pub fn apply_sq(&self, k: u32, t: u32, v: &BitRow) -> Option<BitRow> {
        if t + k > self.deg_max {
            return None;
        }
        if k == 0 {
            return Some(v.clone());
        }
        Some(match self.sq.get(&(k, t)) {
            Some(m) => m.mul_vec(v),
            None => BitRow::zeros(self.dim(t + k)),
        })
    }

    /// Product of two homogeneous elements, if a product table exists and
    /// the result lies in range.
    pub fn mul(&self, t1: u32, v1: &BitRow, t2: u32, v2: &BitRow) -> Option<BitRow> {
        let table = self.product.as_ref()?;
        let t = t1 + t2;
        if t > self.deg_max {
            return None;
        }
        let mut out = BitRow::zeros(self.dim(t));
        for i in v1.ones() {
            for j in v2.ones() {
                if let Some(p) = table.get(&((t1, i), (t2, j))) {
                    out.xor_assign(p);
                }
            }
        }
        Some(out)
    }

    pub fn unit_vector(&self, c: ClassId) -> BitRow {
        BitRow::unit(self.dim(c.0), c.1)
    }

    /// Flips one entry of `Sq^k`: the coefficient of `to` in `Sq^k(from)`.
    /// Only meant for building negative controls.
    pub fn toggle_sq(&mut self, k: u32, from: ClassId, to: ClassId) -> Result<()> {
        if k == 0 || from.0 + k != to.0 || to.0 > self.deg_max {
            return Err(Error::usage(format!(
                "Sq^{k} cannot map degree {} to degree {}",
                from.0, to.0
            )));
        }
        let (rows, cols) = (self.dim(to.0), self.dim(from.0));
        let m = self
            .sq
            .entry((k, from.0))
            .or_insert_with(|| BitMatrix::zeros(rows, cols));
        let value = m.get(to.1, from.1);
        m.set(to.1, from.1, !value);
        Ok(())
    }

    /// Flips the coefficient of `to` in the product `a·b`. Negative controls only.
    pub fn toggle_product(&mut self, a: ClassId, b: ClassId, to: ClassId) -> Result<()> {
        let dim = self.dim(to.0);
        let table = self
            .product
            .as_mut()
            .ok_or_else(|| Error::usage("module has no product"))?;
        if a.0 + b.0 != to.0 {
            return Err(Error::usage("product target has the wrong degree"));
        }
        table
            .entry((a, b))
            .or_insert_with(|| BitRow::zeros(dim))
            .flip(to.1);
        Ok(())
    }

    /// Nonzero `Sq^k` entries, degree by degree.
    pub fn sq_records(&self) -> Vec<SqRecord> {
        let mut out = Vec::new();
        for (&(k, t), m) in &self.sq {
            for i in 0..self.dim(t) {
                let image: Vec<String> = m
                    .column(i)
                    .ones()
                    .map(|j| self.labels[(t + k) as usize][j].clone())
                    .collect();
                if !image.is_empty() {
                    out.push(SqRecord {
                        k,
                        source: self.labels[t as usize][i].clone(),
                        image,
                    });
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let dump = ModuleDump {
            name: self.name.clone(),
            deg_max: self.deg_max,
            degrees: (0..=self.deg_max)
                .filter(|&t| self.dim(t) > 0)
                .map(|t| DegreeDump {
                    degree: t,
                    classes: self.labels(t).to_vec(),
                })
                .collect(),
            squares: self.sq_records(),
        };
        serde_json::to_string_pretty(&dump).expect("module serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SqRecord {
    pub k: u32,
    pub source: String,
    pub image: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeDump {
    pub degree: u32,
    pub classes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDump {
    pub name: String,
    pub deg_max: u32,
    pub degrees: Vec<DegreeDump>,
    pub squares: Vec<SqRecord>,
}

/// `Sq^k z = 0` for `k > |z|`, and `Sq^{|z|} z = z²` when a product exists.
pub fn check_instability(m: &FiniteAModule) -> CheckReport {
    let mut r = CheckReport::new(format!("instability on {}", m.name()));
    for c in m.classes() {
        let (t, _) = c;
        let v = m.unit_vector(c);
        for k in t + 1..=m.deg_max().saturating_sub(t) {
            let image = m.apply_sq(k, t, &v).expect("in range");
            r.expect(image.is_zero(), || {
                format!("Sq^{k}({}) is nonzero above the degree", m.label(c))
            });
        }
        if m.has_product() && t > 0 {
            match (m.apply_sq(t, t, &v), m.mul(t, &v, t, &v)) {
                (Some(sq), Some(square)) => r.expect(sq == square, || {
                    format!("Sq^{t}({0}) differs from {0}^2", m.label(c))
                }),
                _ => r.skip(),
            }
        }
    }
    r
}

/// `Sq^k(ab) = Σ_i Sq^i(a)·Sq^{k−i}(b)` on all basis pairs, `k ≤ k_max`.
pub fn check_cartan(m: &FiniteAModule, k_max: u32) -> Result<CheckReport> {
    if !m.has_product() {
        return Err(Error::usage(format!("{} has no product table", m.name())));
    }
    let mut r = CheckReport::new(format!("Cartan formula on {} for k <= {k_max}", m.name()));
    let classes: Vec<ClassId> = m.classes().collect();
    for &a in &classes {
        let va = m.unit_vector(a);
        let sq_a: Vec<Option<BitRow>> = (0..=k_max).map(|i| m.apply_sq(i, a.0, &va)).collect();
        for &b in &classes {
            let t = a.0 + b.0;
            if t > m.deg_max() {
                continue;
            }
            let vb = m.unit_vector(b);
            let ab = m.mul(a.0, &va, b.0, &vb).expect("in range");
            for k in 1..=k_max {
                if t + k > m.deg_max() {
                    r.skip();
                    continue;
                }
                let lhs = m.apply_sq(k, t, &ab).expect("in range");
                let mut rhs = BitRow::zeros(m.dim(t + k));
                for i in 0..=k {
                    let left = sq_a[i as usize].as_ref().expect("in range");
                    let right = m.apply_sq(k - i, b.0, &vb).expect("in range");
                    rhs.xor_assign(&m.mul(a.0 + i, left, b.0 + k - i, &right).expect("in range"));
                }
                r.expect(lhs == rhs, || {
                    format!(
                        "Sq^{k}({} * {}) violates the Cartan formula",
                        m.label(a),
                        m.label(b)
                    )
                });
            }
        }
    }
    Ok(r)
}

/// Coefficient of `Sq^{a+b−j} Sq^j` in the Adem expansion of `Sq^a Sq^b`,
/// `a < 2b`: `C(b−1−j, a−2j) mod 2`.
pub fn adem_coefficient(a: u32, b: u32, j: u32) -> bool {
    if 2 * j > a || j + 1 > b {
        return false;
    }
    lucas(u64::from(b - 1 - j), u64::from(a - 2 * j))
}

/// Adem relations `Sq^a Sq^b = Σ_j C(b−1−j, a−2j) Sq^{a+b−j} Sq^j` for
/// `1 ≤ a < 2b`, `a, b ≤ k_max`, on every class where all terms are in range.
pub fn check_adem(m: &FiniteAModule, k_max: u32) -> CheckReport {
    let mut r = CheckReport::new(format!(
        "Adem relations on {} for a, b <= {k_max}",
        m.name()
    ));
    for c in m.classes() {
        let (t, _) = c;
        let v = m.unit_vector(c);
        for b in 1..=k_max {
            for a in 1..(2 * b).min(k_max + 1) {
                if t + a + b > m.deg_max() {
                    r.skip();
                    continue;
                }
                let sb = m.apply_sq(b, t, &v).expect("in range");
                let lhs = m.apply_sq(a, t + b, &sb).expect("in range");
                let mut rhs = BitRow::zeros(m.dim(t + a + b));
                for j in 0..=a / 2 {
                    if adem_coefficient(a, b, j) {
                        let sj = m.apply_sq(j, t, &v).expect("in range");
                        rhs.xor_assign(&m.apply_sq(a + b - j, t + j, &sj).expect("in range"));
                    }
                }
                r.expect(lhs == rhs, || {
                    format!("Sq^{a} Sq^{b} on {} violates the Adem relation", m.label(c))
                });
            }
        }
    }
    r
}

/// Checks that `dictionary` (pairs of labels `M ↔ N`) is a degree-preserving
/// bijection of bases intertwining every `Sq^k`, `k ≤ k_max`.
pub fn module_iso(
    m: &FiniteAModule,
    n: &FiniteAModule,
    dictionary: &[(String, String)],
    k_max: u32,
) -> Result<CheckReport> {
    if m.deg_max() != n.deg_max() {
        return Err(Error::usage(format!(
            "modules are stored to degrees {} and {}",
            m.deg_max(),
            n.deg_max()
        )));
    }
    let mut forward: HashMap<ClassId, ClassId> = HashMap::new();
    let mut backward: HashMap<ClassId, ClassId> = HashMap::new();
    for (lm, ln) in dictionary {
        let a = m
            .find(lm)
            .ok_or_else(|| Error::usage(format!("{lm} is not a class of {}", m.name())))?;
        let b = n
            .find(ln)
            .ok_or_else(|| Error::usage(format!("{ln} is not a class of {}", n.name())))?;
        if a.0 != b.0 {
            return Err(Error::usage(format!(
                "dictionary pairs {lm} (degree {}) with {ln} (degree {})",
                a.0, b.0
            )));
        }
        if forward.insert(a, b).is_some() || backward.insert(b, a).is_some() {
            return Err(Error::usage(format!(
                "dictionary is not injective at {lm} <-> {ln}"
            )));
        }
    }
    let mut r = CheckReport::new(format!("{} isomorphic to {}", m.name(), n.name()));
    for t in 0..=m.deg_max() {
        r.expect(m.dim(t) == n.dim(t), || {
            format!("degree {t}: dimensions {} and {}", m.dim(t), n.dim(t))
        });
    }
    if forward.len() != m.total_dim() || backward.len() != n.total_dim() {
        return Err(Error::usage(format!(
            "dictionary covers {} of {} and {} of {} classes",
            forward.len(),
            m.total_dim(),
            backward.len(),
            n.total_dim()
        )));
    }
    let translate = |t: u32, v: &BitRow| -> BitRow {
        let mut out = BitRow::zeros(n.dim(t));
        for i in v.ones() {
            out.flip(forward[&(t, i)].1);
        }
        out
    };
    for c in m.classes() {
        let (t, _) = c;
        let v = m.unit_vector(c);
        let image = translate(t, &v);
        for k in 1..=k_max {
            match (m.apply_sq(k, t, &v), n.apply_sq(k, t, &image)) {
                (Some(a), Some(b)) => r.expect(translate(t + k, &a) == b, || {
                    format!(
                        "Sq^{k} on {} does not match Sq^{k} on {}",
                        m.label(c),
                        n.label(forward[&c])
                    )
                }),
                _ => r.skip(),
            }
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Truncated polynomial algebra on one class of degree `r` (a power of
    /// two), `x^j` for `0 ≤ j ≤ n`, with `Sq^{ri} x^j = C(j, i) x^{i+j}`.
    fn truncated(n: u32, r: u32, deg_max: u32) -> FiniteAModule {
        let classes: Vec<ClassSpec> = (0..=n)
            .map(|j| ClassSpec::new(format!("x^{j}"), r * j))
            .collect();
        let sq = move |k: u32, c: usize| -> Vec<usize> {
            let j = c as u32;
            if !k.is_multiple_of(r) {
                return vec![];
            }
            let i = k / r;
            if i + j <= n && lucas(u64::from(j), u64::from(i)) {
                vec![(i + j) as usize]
            } else {
                vec![]
            }
        };
        let prod = move |a: usize, b: usize| {
            if a + b <= n as usize {
                vec![a + b]
            } else {
                vec![]
            }
        };
        FiniteAModule::build("trunc", deg_max, &classes, &sq, Some(&prod)).unwrap()
    }

    #[test]
    fn truncated_algebra_passes_all_checks() {
        for (n, r) in [(3, 2), (2, 4), (2, 8), (5, 1)] {
            let m = truncated(n, r, 40);
            let i = check_instability(&m);
            assert!(i.pass, "{:?}", i.failures);
            let c = check_cartan(&m, 16).unwrap();
            assert!(c.pass, "{:?}", c.failures);
            let a = check_adem(&m, 16);
            assert!(a.pass, "{:?}", a.failures);
            assert!(c.checked > 0 && a.checked > 0);
        }
    }

    #[test]
    fn sq1_sq2_is_sq3() {
        let m = truncated(4, 1, 20);
        let v = m.unit_vector(m.find("x^1").unwrap());
        let lhs = m.apply_sq(1, 3, &m.apply_sq(2, 1, &v).unwrap()).unwrap();
        assert_eq!(lhs, m.apply_sq(3, 1, &v).unwrap());
    }

    fn three_classes() -> FiniteAModule {
        let classes = [
            ClassSpec::new("a", 2),
            ClassSpec::new("b", 3),
            ClassSpec::new("c", 5),
        ];
        let sq = |k: u32, c: usize| if k == 1 && c == 0 { vec![1] } else { vec![] };
        FiniteAModule::build("three", 12, &classes, &sq, None).unwrap()
    }

    #[test]
    fn instability_negative_control() {
        let mut m = three_classes();
        assert!(check_instability(&m).pass);
        m.toggle_sq(3, (2, 0), (5, 0)).unwrap();
        assert!(!check_instability(&m).pass);
    }

    #[test]
    fn adem_negative_control() {
        assert!(check_adem(&three_classes(), 4).pass);
        // Sq^1 Sq^1 = 0 fails when Sq^1 chains a -> b -> c.
        let classes = [
            ClassSpec::new("a", 2),
            ClassSpec::new("b", 3),
            ClassSpec::new("c", 4),
        ];
        let sq = |k: u32, c: usize| if k == 1 && c < 2 { vec![c + 1] } else { vec![] };
        let bad = FiniteAModule::build("bad", 10, &classes, &sq, None).unwrap();
        assert!(!check_adem(&bad, 2).pass);
    }

    #[test]
    fn cartan_negative_control() {
        let mut m = truncated(4, 2, 20);
        assert!(check_cartan(&m, 8).unwrap().pass);
        m.toggle_sq(2, (2, 0), (4, 0)).unwrap();
        assert!(!check_cartan(&m, 8).unwrap().pass);
        assert!(check_cartan(&three_classes(), 4).is_err());
    }

    #[test]
    fn iso_checks() {
        let m = truncated(3, 2, 20);
        let identity: Vec<(String, String)> = (0..=3)
            .map(|j| (format!("x^{j}"), format!("x^{j}")))
            .collect();
        assert!(module_iso(&m, &m, &identity, 8).unwrap().pass);

        let classes = [
            ClassSpec::new("a", 2),
            ClassSpec::new("b", 2),
            ClassSpec::new("c", 3),
        ];
        let sq = |k: u32, c: usize| if k == 1 && c == 0 { vec![2] } else { vec![] };
        let n = FiniteAModule::build("two", 6, &classes, &sq, None).unwrap();
        let good =
            [("a", "a"), ("b", "b"), ("c", "c")].map(|(x, y)| (x.to_string(), y.to_string()));
        assert!(module_iso(&n, &n, &good, 3).unwrap().pass);
        let swapped =
            [("a", "b"), ("b", "a"), ("c", "c")].map(|(x, y)| (x.to_string(), y.to_string()));
        assert!(!module_iso(&n, &n, &swapped, 3).unwrap().pass);
        let broken =
            [("a", "c"), ("b", "b"), ("c", "a")].map(|(x, y)| (x.to_string(), y.to_string()));
        assert!(module_iso(&n, &n, &broken, 3).is_err());
        assert!(module_iso(&n, &n, &good[..2], 3).is_err());
    }

    #[test]
    fn adem_coefficients_match_exact_binomials() {
        fn binom(n: u32, k: u32) -> u128 {
            if k > n {
                return 0;
            }
            (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
        }
        for b in 1..=32u32 {
            for a in 1..2 * b {
                if a > 32 {
                    break;
                }
                for j in 0..=a / 2 {
                    let exact = if j + 1 > b {
                        0
                    } else {
                        binom(b - 1 - j, a - 2 * j)
                    };
                    assert_eq!(
                        adem_coefficient(a, b, j),
                        exact % 2 == 1,
                        "a={a} b={b} j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn truncation_is_reported() {
        let m = truncated(3, 2, 6);
        let a = check_adem(&m, 4);
        assert!(a.skipped > 0);
        assert!(m.sq(2, 6).is_none());
    }

    #[test]
    fn json_lists_classes_and_squares() {
        let m = truncated(2, 2, 10);
        let dump: ModuleDump = serde_json::from_str(&m.to_json()).unwrap();
        assert_eq!(dump.degrees.len(), 3);
        assert_eq!(
            dump.squares,
            vec![SqRecord {
                k: 2,
                source: "x^1".into(),
                image: vec!["x^2".into()]
            }]
        );
    }
}
