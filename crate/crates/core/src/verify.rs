//! Batch verification runs: each collects [`CheckReport`]s into one
//! [`RunReport`] whose exit code is 0 exactly when nothing failed.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, ChainKind, GradingSpec};
use crate::closedform::{loop_cohomology, lucas, sq1_constant, Main1Label, Main1Presentation};
use crate::error::{Error, Result};
use crate::ez::{delta_top, run_trials, shuffle_product, structure_checks, TrialConfig};
use crate::gf2::{BitRow, Subspace};
use crate::homology::{koszul_dim, ChainComplex, HomologyTable};
use crate::report::CheckReport;
use crate::simplicial::{distinguished, Distinguished, FaceMutation, ResolutionContext, YImage};
use crate::steenrod::{check_adem, check_cartan, check_instability, module_iso};
use crate::thom::{
    cofiber_sq1, ct_assemble_f2, ct_assemble_z, sphere_cq, sphere_splitting_z, ziller_loop_z_table,
    ziller_sq1_degrees, SpaceDescriptor, SpaceKind, StableCell,
};

/// The outcome of one command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub checks: Vec<CheckReport>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    /// Some check hit the stored range and left instances unevaluated.
    pub truncated: bool,
    pub wall_time_ms: u64,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            parameters: BTreeMap::new(),
            checks: Vec::new(),
            passed: 0,
            failed: 0,
            skipped: 0,
            truncated: false,
            wall_time_ms: 0,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.insert(key.into(), value.to_string());
        self
    }

    pub fn push(&mut self, check: CheckReport) {
        if check.pass {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        self.skipped += check.skipped;
        self.truncated |= check.skipped > 0;
        self.checks.push(check);
    }

    pub fn finish(&mut self, started: Instant) {
        self.wall_time_ms = started.elapsed().as_millis() as u64;
    }

    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per check: `check<TAB>PASS|FAIL<TAB>checked<TAB>skipped`,
    /// followed by indented failure messages.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("check\tverdict\tchecked\tskipped\n");
        for c in &self.checks {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{}\t{verdict}\t{}\t{}\n",
                c.check, c.checked, c.skipped
            ));
            for f in &c.failures {
                out.push_str(&format!("#\t{f}\n"));
            }
        }
        out.push_str(&format!(
            "# {}: {} passed, {} failed, {} skipped{}\n",
            self.command,
            self.passed,
            self.failed,
            self.skipped,
            if self.truncated { " (truncated)" } else { "" }
        ));
        out
    }
}

/// A corrupted face map that breaks the simplicial identities: `d_1(y_2)`
/// at level 2 sent to zero instead of `y_1`.
pub fn injected_fault() -> FaceMutation {
    FaceMutation {
        level: 2,
        face: 1,
        y_index: 2,
        image: YImage::Zero,
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Main1Config {
    pub n: u32,
    pub m: u32,
    pub max_level: usize,
    /// Largest internal degree; defaults to `3(n+1)m`.
    pub max_degree: Option<u32>,
    /// Also check products and `δ` on representatives (levels up to 4).
    pub relations: bool,
    pub fault: bool,
}

impl Main1Config {
    pub fn new(n: u32, m: u32, max_level: usize) -> Self {
        Self {
            n,
            m,
            max_level,
            max_degree: None,
            relations: true,
            fault: false,
        }
    }

    pub fn degree_cutoff(&self) -> u32 {
        self.max_degree.unwrap_or(3 * (self.n + 1) * self.m)
    }
}

pub fn main1_complex(cfg: &Main1Config) -> Result<ChainComplex> {
    let g = GradingSpec::new(cfg.n, cfg.m)?;
    let mut ctx = ResolutionContext::new(g, cfg.max_level.max(4) + 2);
    if cfg.fault {
        ctx = ctx.with_mutation(injected_fault());
    }
    Ok(ChainComplex::new(ctx, ChainKind::DeRham))
}

/// Dimensions of the brute-force homology against the closed form and the
/// Koszul oracle on the grid `q ≤ max_q`, `t ≤ max_t`.
pub fn dims_checks(
    cx: &ChainComplex,
    table: &HomologyTable,
    max_q: usize,
    max_t: u32,
) -> [CheckReport; 2] {
    let g = *cx.grading();
    let pres = Main1Presentation::new(g);
    let mut closed = CheckReport::new(format!("homology = closed form (n={}, m={})", g.n, g.m));
    let mut koszul = CheckReport::new(format!("homology = Koszul oracle (n={}, m={})", g.n, g.m));
    for q in 0..=max_q {
        for t in 0..=max_t {
            let brute = table.get(q, t).map_or(0, |c| c.dim);
            let want = pres.dims(q, t);
            closed.expect(brute == want, || {
                format!("(q,t)=({q},{t}): homology {brute}, closed form {want}")
            });
            let k = koszul_dim(&g, q, t);
            koszul.expect(brute == k, || {
                format!("(q,t)=({q},{t}): homology {brute}, Koszul {k}")
            });
        }
    }
    [closed, koszul]
}

/// The named representatives are normalized cycles whose classes are
/// independent in each bidegree, and the omitted-factor elements are degenerate.
pub fn representative_checks(cx: &ChainComplex, max_q: usize, max_t: u32) -> Result<CheckReport> {
    let g = *cx.grading();
    let pres = Main1Presentation::new(g);
    let mut r = CheckReport::new(format!("representatives (n={}, m={})", g.n, g.m));
    for q in 0..=max_q {
        let mut by_degree: BTreeMap<u32, Vec<Main1Label>> = BTreeMap::new();
        for l in pres.labels(q) {
            by_degree
                .entry(pres.internal_degree(&l))
                .or_default()
                .push(l);
        }
        for (t, labels) in by_degree.range(..=max_t) {
            let dim = cx.homology_dim(q, *t)?;
            let mut span = Subspace::zero(dim);
            for l in labels {
                let z = pres.representative(l)?;
                if !cx.is_normalized(&z)? || !cx.is_cycle(&z)? {
                    r.fail(format!("{l}: representative {z} is not a normalized cycle"));
                    continue;
                }
                let coords = cx.class_of(&z)?;
                r.expect(span.insert(BitRow::from_indices(dim, coords)), || {
                    format!(
                        "{l}: class is zero or dependent on the other labels in (q,t)=({q},{t})"
                    )
                });
            }
        }
    }
    let ctx = cx.context();
    for q in 0..=max_q {
        let p = q + 1;
        for i in 1..=p {
            let hat = distinguished(Distinguished::OmegaHat(i), p)?;
            r.expect(ctx.is_degenerate(&hat)?, || {
                format!("(omega_{p})_{i} is not degenerate")
            });
            for j in i + 1..=p {
                let hh = distinguished(Distinguished::OmegaHatHat(i, j), p)?;
                r.expect(ctx.is_degenerate(&hh)?, || {
                    format!("(omega_{p})_({i},{j}) is not degenerate")
                });
                for k in 1..=p {
                    let y = AlgebraElement::parse(p, &format!("y{k}"))?.mul(&hh)?;
                    r.expect(ctx.is_degenerate(&y)?, || {
                        format!("y{k} (omega_{p})_({i},{j}) is not degenerate")
                    });
                }
            }
        }
    }
    Ok(r)
}

fn homologous(
    cx: &ChainComplex,
    r: &mut CheckReport,
    lhs: AlgebraElement,
    rhs: AlgebraElement,
    label: String,
) {
    let mut diff = lhs;
    diff.add_assign(&rhs);
    match cx.is_boundary(&diff) {
        Ok(true) => r.ok(),
        Ok(false) => r.fail(format!(
            "{label}: chain-level value differs from the closed form in homology"
        )),
        Err(e) => r.fail(format!("{label}: {e}")),
    }
}

/// Every product of basis labels with `p + q ≤ max_total` and every `δ_2`
/// on a generator, computed by shuffles on representatives and compared
/// with the presentation's tables.
pub fn presentation_checks(cx: &ChainComplex, max_total: usize) -> Result<CheckReport> {
    let g = *cx.grading();
    let pres = Main1Presentation::new(g);
    let ctx = cx.context();
    let mut r = CheckReport::new(format!(
        "closed-form tables on representatives (n={}, m={})",
        g.n, g.m
    ));
    let rep_or_zero = |l: Option<Main1Label>, level: usize| -> Result<AlgebraElement> {
        l.map_or(Ok(AlgebraElement::zero(level)), |l| pres.representative(&l))
    };
    for p in 0..=max_total {
        for q in 0..=max_total - p {
            for la in pres.labels(p) {
                for lb in pres.labels(q) {
                    let lhs = shuffle_product(
                        ctx,
                        &pres.representative(&la)?,
                        &pres.representative(&lb)?,
                    )?;
                    let rhs = rep_or_zero(pres.product(&la, &lb)?, p + q)?;
                    homologous(cx, &mut r, lhs, rhs, format!("{la} * {lb}"));
                }
            }
        }
    }
    let generators = if g.is_n_odd() {
        vec![Main1Label::Gamma {
            x: 0,
            dx: false,
            q: 2,
        }]
    } else {
        vec![Main1Label::A { x: 0, q: 2 }, Main1Label::B { x: 0, q: 2 }]
    };
    for l in generators {
        let lhs = delta_top(cx, &pres.representative(&l)?)?;
        let rhs = rep_or_zero(pres.delta(2, &l)?, 4)?;
        homologous(cx, &mut r, lhs, rhs, format!("delta_2 {l}"));
    }
    Ok(r)
}

/// `C(2q−1, q)` is odd exactly for powers of two, `q ≤ q_max`.
pub fn binomial_pattern_check(q_max: u64) -> CheckReport {
    let mut r = CheckReport::new(format!("C(2q-1,q) odd iff q is a power of 2, q <= {q_max}"));
    for q in 1..=q_max {
        r.expect(lucas(2 * q - 1, q) == q.is_power_of_two(), || {
            format!("q={q}")
        });
    }
    r
}

/// `verify main1`: brute-force homology against the closed form and the
/// Koszul oracle, the representatives, and (optionally) the product and
/// operation relations.
pub fn verify_main1(cfg: &Main1Config) -> Result<(RunReport, HomologyTable)> {
    let started = Instant::now();
    let cx = main1_complex(cfg)?;
    let max_t = cfg.degree_cutoff();
    let mut run = RunReport::new("verify main1");
    run.param("n", cfg.n)
        .param("m", cfg.m)
        .param("max_level", cfg.max_level)
        .param("max_degree", max_t);
    if cfg.fault {
        run.param("fault", "face map d_1(y_2) at level 2");
    }
    let ctx = cx.context();
    let mut identities = CheckReport::new("simplicial identities");
    for q in 1..=cfg.max_level.max(1) {
        identities.merge(ctx.check_simplicial_identities(q));
    }
    run.push(identities);
    run.push(ctx.check_pi0(2 * (cfg.n + 1) * cfg.m));
    let body = |run: &mut RunReport| -> Result<HomologyTable> {
        let table = cx.table(cfg.max_level, max_t)?;
        for c in dims_checks(&cx, &table, cfg.max_level, max_t) {
            run.push(c);
        }
        run.push(representative_checks(&cx, cfg.max_level, max_t)?);
        if cfg.relations {
            run.push(structure_checks(&cx, 4)?);
            run.push(presentation_checks(&cx, 4)?);
            run.push(binomial_pattern_check(4096));
        }
        Ok(table)
    };
    let table = match body(&mut run) {
        Ok(table) => table,
        // A broken complex (d∘d ≠ 0) surfaces here; it is a failed check, not a usage error.
        Err(Error::Structural(msg)) => {
            let mut c = CheckReport::new("homology computation");
            c.fail(msg);
            run.push(c);
            HomologyTable::empty(*cx.grading())
        }
        Err(e) => return Err(e),
    };
    run.finish(started);
    Ok((run, table))
}

/// `verify steenrod`: the axioms on the closed-form loop-space cohomology.
pub fn verify_steenrod(space: &SpaceDescriptor, deg_max: u32, k_max: u32) -> Result<RunReport> {
    let started = Instant::now();
    let mut run = RunReport::new("verify steenrod");
    run.param("space", space)
        .param("max_degree", deg_max)
        .param("max_sq", k_max);
    let l = loop_cohomology(space, deg_max)?;
    run.push(check_instability(&l.module));
    run.push(check_cartan(&l.module, k_max)?);
    run.push(check_adem(&l.module, k_max));
    run.finish(started);
    Ok(run)
}

/// Pairs of `(CT label, loop label)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonDictionary {
    pub space: String,
    pub pairs: Vec<(String, String)>,
}

/// The correspondence between the cofiber classes of `CT(M)` and the basis
/// of `H*(ΛM)`, for every class of degree `≤ deg_max`.
pub fn build_dictionary(space: &SpaceDescriptor, deg_max: u32) -> Result<ComparisonDictionary> {
    let (n, r, d) = (space.n, space.r, space.d);
    let pres = Main1Presentation::new(GradingSpec::new(n, r)?);
    let shift = |q: u32| (r - 2) * (q + 1);
    let mut pairs = Vec::new();
    let mut add = |ct: String, ct_degree: u32, l: Main1Label| -> Result<()> {
        let loop_degree = pres.total_degree(&l);
        if ct_degree != loop_degree {
            return Err(Error::structural(format!(
                "{ct} has degree {ct_degree} but {l} has degree {loop_degree}"
            )));
        }
        if ct_degree <= deg_max {
            pairs.push((ct, l.to_string()));
        }
        Ok(())
    };
    let power = |j: u32| match j {
        0 => "1".to_string(),
        1 => "x".to_string(),
        _ => format!("x^{j}"),
    };
    let odd = n % 2 == 1;
    if odd {
        for j in 0..=n {
            add(
                power(j),
                r * j,
                Main1Label::Gamma {
                    x: j,
                    dx: false,
                    q: 0,
                },
            )?;
        }
    } else {
        add(power(0), 0, Main1Label::Unit)?;
        for j in 0..n {
            add(power(j + 1), r * (j + 1), Main1Label::B { x: j, q: 0 })?;
        }
    }
    let mut q = 0u32;
    while q * d + 1 + shift(q) <= deg_max {
        let qs = q as usize;
        if odd {
            for j in 0..=n {
                add(
                    format!("c{q}^{j}"),
                    r * j + q * d + 1 + shift(q),
                    Main1Label::Gamma {
                        x: j,
                        dx: true,
                        q: qs,
                    },
                )?;
                add(
                    format!("d{}^{j}", q + 1),
                    r * j + (q + 1) * d + shift(q),
                    Main1Label::Gamma {
                        x: j,
                        dx: false,
                        q: qs + 1,
                    },
                )?;
            }
        } else {
            for j in 0..n {
                add(
                    format!("a{q}^{j}"),
                    r * j + q * d + 1 + shift(q),
                    Main1Label::A { x: j, q: qs },
                )?;
                add(
                    format!("b{}^{j}", q + 1),
                    r * (j + 1) + (q + 1) * d + shift(q),
                    Main1Label::B { x: j, q: qs + 1 },
                )?;
            }
        }
        q += 1;
    }
    Ok(ComparisonDictionary {
        space: space.name(),
        pairs,
    })
}

/// The `Sq¹` pattern of the cofibers against the constants `c_q` and the
/// 2-torsion of the integral reference.
pub fn sq1_consistency(space: &SpaceDescriptor, deg_max: u32) -> Result<CheckReport> {
    let mut r = CheckReport::new(format!("Sq^1 consistency for {space}"));
    let thom_side = match space.kind {
        SpaceKind::Sphere(m) if space.chi == 0 => Some(
            sphere_cq(m, 0)?
                .iter()
                .any(|c| matches!(c, StableCell::Moore2(_))),
        ),
        _ => cofiber_sq1(space),
    };
    let loop_side = sq1_constant(space);
    r.expect(thom_side == loop_side, || {
        format!("cofiber Sq^1 pattern {thom_side:?}, loop constant {loop_side:?}")
    });
    let l = loop_cohomology(space, deg_max)?;
    let loop_degrees: Vec<u32> = (0..deg_max)
        .filter(|&t| l.module.sq(1, t).is_some_and(|m| !m.is_zero()))
        .collect();
    let reference = ziller_sq1_degrees(space, deg_max - 1);
    r.expect(loop_degrees == reference, || {
        format!("Sq^1 is nonzero from degrees {loop_degrees:?}; 2-torsion predicts {reference:?}")
    });
    Ok(r)
}

/// `compare --coeff f2`: the dictionary intertwines every `Sq^k`, `k ≤ k_max`.
pub fn compare_f2(space: &SpaceDescriptor, deg_max: u32, k_max: u32) -> Result<RunReport> {
    let started = Instant::now();
    let mut run = RunReport::new("compare f2");
    run.param("space", space)
        .param("max_degree", deg_max)
        .param("max_sq", k_max);
    let ct = ct_assemble_f2(space, deg_max)?;
    let lp = loop_cohomology(space, deg_max)?;
    let dict = build_dictionary(space, deg_max)?;
    run.push(module_iso(&ct, &lp.module, &dict.pairs, k_max)?);
    run.push(sq1_consistency(space, deg_max)?);
    run.finish(started);
    Ok(run)
}

/// Per-degree equality of two tables of groups.
pub fn groups_check(
    name: String,
    left: &crate::thom::GradedAbelianGroups,
    right: &crate::thom::GradedAbelianGroups,
    deg_max: u32,
) -> CheckReport {
    let mut r = CheckReport::new(name);
    for k in 0..=deg_max {
        let (a, b) = (left.get(k), right.get(k));
        r.expect(a == b, || format!("degree {k}: {a} vs {b}"));
    }
    r
}

/// `compare --coeff z`: `CT(M)` against the reference integral homology of
/// `ΛM`, and for spheres also the stable splitting.
pub fn compare_z(space: &SpaceDescriptor, deg_max: u32) -> Result<RunReport> {
    let started = Instant::now();
    let mut run = RunReport::new("compare z");
    run.param("space", space).param("max_degree", deg_max);
    let ct = ct_assemble_z(space, deg_max)?;
    run.push(groups_check(
        format!("H_*(CT({space});Z) = H_*(L{space};Z)"),
        &ct,
        &ziller_loop_z_table(space, deg_max),
        deg_max,
    ));
    if let SpaceKind::Sphere(m) = space.kind {
        run.push(groups_check(
            format!("H_*(CT({space});Z) = H_*(S^0 v D_k;Z)"),
            &ct,
            &sphere_splitting_z(m, deg_max)?,
            deg_max,
        ));
    }
    run.finish(started);
    Ok(run)
}

/// `verify ez`: seeded random instances of the shuffle identities and lemmas.
pub fn verify_ez(n: u32, m: u32, max_level: usize, trials: usize, seed: u64) -> Result<RunReport> {
    let started = Instant::now();
    let mut run = RunReport::new("verify ez");
    run.param("n", n)
        .param("m", m)
        .param("max_level", max_level)
        .param("trials", trials)
        .param("seed", seed);
    let g = GradingSpec::new(n, m)?;
    let cx = ChainComplex::new(
        ResolutionContext::new(g, 2 * max_level + 3),
        ChainKind::DeRham,
    );
    let cfg = TrialConfig {
        trials,
        seed,
        max_level,
        max_t: 2 * (n + 1) * m,
    };
    for c in run_trials(&cx, cfg)? {
        run.push(c);
    }
    run.finish(started);
    Ok(run)
}
