//! One function per subcommand; each returns structured results plus a human rendering.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use flasque::cohomology::{h_one, h_one_via_periodic_resolution, tate_minus_one, tate_zero, TateGroup};
use flasque::dedekind::cyclotomic_order_maximality;
use flasque::exactla::{smith_invariants, AbelianInvariants};
use flasque::flabby::{
    classify, twisted_line_counterexample, gaussian_twisted_line_counterexample, flabby_resolution, permutation_recognize_cp,
    phi_decompose, split_check, Classification, NotPermutation, PermutationDecomposition, SplitOutcome, Witness,
};
use flasque::groupring::{is_prime, BaseRing};
use flasque::{GroupLattice, IntMatrix};

use crate::document::{Int, LatticeDocument};
use crate::CliError;

pub struct Outcome {
    pub results: Value,
    pub text: String,
}

fn outcome<T: Serialize>(results: &T, text: String) -> Outcome {
    Outcome { results: serde_json::to_value(results).expect("results serialise"), text }
}

#[derive(Serialize)]
struct LatticeSummary {
    base: BaseRing,
    group_order: usize,
    z_rank: usize,
}

impl LatticeSummary {
    fn of(m: &GroupLattice) -> Self {
        Self { base: m.base(), group_order: m.group().order(), z_rank: m.z_rank() }
    }

    fn line(&self) -> String {
        format!("lattice of Z-rank {} over {}[C_{}]", self.z_rank, self.base, self.group_order)
    }
}

#[derive(Serialize)]
struct SubgroupRow {
    subgroup_order: usize,
    h_minus_one: AbelianInvariants,
    h_zero: AbelianInvariants,
    h_one: AbelianInvariants,
    #[serde(skip_serializing_if = "Option::is_none")]
    zeta_blocks_minus_one: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    zeta_blocks_zero: Option<Vec<usize>>,
}

#[derive(Serialize)]
struct CohomologyResults {
    lattice: LatticeSummary,
    subgroups: Vec<SubgroupRow>,
}

fn blocks(g: &TateGroup) -> Option<Vec<usize>> {
    g.zeta_blocks().and_then(Result::ok)
}

pub fn cohomology(m: &GroupLattice, subgroup: Option<usize>) -> Result<Outcome, CliError> {
    let subgroups = match subgroup {
        Some(d) => vec![m.group().subgroup(d).map_err(|e| CliError::Parse(e.to_string()))?],
        None => m.group().subgroups(),
    };
    let mut rows = Vec::new();
    for h in subgroups {
        let hm1 = tate_minus_one(m, &h)?;
        let h0 = tate_zero(m, &h)?;
        let h1 = h_one(m, &h)?;
        let periodic = h_one_via_periodic_resolution(m, &h)?;
        if h1 != periodic {
            return Err(CliError::Invariant(format!(
                "H^1 at subgroup {}: norm route gives {h1}, periodic resolution gives {periodic}",
                h.order()
            )));
        }
        rows.push(SubgroupRow {
            subgroup_order: h.order(),
            zeta_blocks_minus_one: blocks(&hm1),
            zeta_blocks_zero: blocks(&h0),
            h_minus_one: hm1.invariants,
            h_zero: h0.invariants,
            h_one: h1,
        });
    }
    let r = CohomologyResults { lattice: LatticeSummary::of(m), subgroups: rows };
    let mut text = r.lattice.line() + "\n";
    for row in &r.subgroups {
        let _ = writeln!(
            text,
            "subgroup of order {}: H^-1 = {}, H^0 = {}, H^1 = {}",
            row.subgroup_order, row.h_minus_one, row.h_zero, row.h_one
        );
    }
    Ok(outcome(&r, text))
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
enum ProfileOutcome {
    Permutation(PermutationDecomposition),
    NotPermutation(NotPermutation),
}

#[derive(Serialize)]
struct PermutationProfile {
    p: u64,
    outcome: ProfileOutcome,
}

#[derive(Serialize)]
struct ClassifyResults {
    lattice: LatticeSummary,
    classification: Classification,
    #[serde(skip_serializing_if = "Option::is_none")]
    permutation_profile: Option<PermutationProfile>,
}

fn witness_text(w: &Option<Witness>) -> String {
    match w {
        None => "yes".into(),
        Some(w) => format!("no (subgroup of order {}: {})", w.subgroup_order, w.group),
    }
}

pub fn classify_lattice(m: &GroupLattice) -> Result<Outcome, CliError> {
    let classification = classify(m)?;
    let n = m.group().order();
    // the profile applies to C_p-lattices read over Z_(p)
    let profile_prime = match m.base() {
        BaseRing::Integers if is_prime(n as u64) => Some(n as u64),
        BaseRing::LocalizedAtP { p } if p == n as u64 => Some(p),
        _ => None,
    };
    let permutation_profile = match profile_prime {
        Some(p) => Some(PermutationProfile {
            p,
            outcome: match permutation_recognize_cp(m, p)? {
                Ok(d) => ProfileOutcome::Permutation(d),
                Err(e) => ProfileOutcome::NotPermutation(e),
            },
        }),
        None => None,
    };
    let r = ClassifyResults { lattice: LatticeSummary::of(m), classification, permutation_profile };
    let mut text = r.lattice.line() + "\n";
    let _ = writeln!(text, "flabby: {}", witness_text(&r.classification.flabby_witness));
    let _ = writeln!(text, "coflabby: {}", witness_text(&r.classification.coflabby_witness));
    if let Some(p) = &r.permutation_profile {
        match &p.outcome {
            ProfileOutcome::Permutation(d) => {
                let _ = writeln!(text, "over Z_({}): Z^{} + (Z C_{})^{}", p.p, d.trivial, p.p, d.regular);
            }
            ProfileOutcome::NotPermutation(e) => {
                let _ = writeln!(text, "over Z_({}): not a permutation lattice ({e:?})", p.p);
            }
        }
    }
    Ok(outcome(&r, text))
}

fn ints(v: Vec<num_bigint::BigInt>) -> Vec<Int> {
    v.into_iter().map(Int).collect()
}

#[derive(Serialize)]
struct Exactness {
    composition_zero: bool,
    /// All ones: injective with saturated image.
    inject_elementary_divisors: Vec<Int>,
    /// All ones: surjective.
    surject_elementary_divisors: Vec<Int>,
}

#[derive(Serialize)]
struct ResolveResults {
    lattice: LatticeSummary,
    permutation_orbits: Vec<usize>,
    permutation: LatticeDocument,
    flabby: LatticeDocument,
    inject: IntMatrix,
    surject: IntMatrix,
    exactness: Exactness,
    flabby_classification: Classification,
    splits: bool,
}

pub fn resolve(m: &GroupLattice) -> Result<Outcome, CliError> {
    let r = flabby_resolution(m)?;
    r.verify()?;
    let composition_zero = (r.surject() * r.inject()).is_zero();
    let results = ResolveResults {
        lattice: LatticeSummary::of(m),
        permutation_orbits: r.middle_orbits.clone(),
        permutation: LatticeDocument::from_lattice(r.middle()),
        flabby: LatticeDocument::from_lattice(r.outer()),
        inject: r.inject().clone(),
        surject: r.surject().clone(),
        exactness: Exactness {
            composition_zero,
            inject_elementary_divisors: ints(smith_invariants(r.inject())),
            surject_elementary_divisors: ints(smith_invariants(r.surject())),
        },
        flabby_classification: classify(r.outer())?,
        splits: matches!(split_check(&r.sequence)?, SplitOutcome::Split(_)),
    };
    let mut text = results.lattice.line() + "\n";
    let _ = writeln!(
        text,
        "0 -> M -> P -> E -> 0 with P of Z-rank {} (orbits {:?}) and E of Z-rank {}",
        r.middle().z_rank(),
        results.permutation_orbits,
        r.outer().z_rank()
    );
    let _ = writeln!(text, "exact: {}", composition_zero);
    let _ = writeln!(text, "E flabby: {}", results.flabby_classification.is_flabby);
    let _ = writeln!(text, "sequence splits: {}", results.splits);
    Ok(outcome(&results, text))
}

pub fn decompose(m: &GroupLattice) -> Result<Outcome, CliError> {
    let d = phi_decompose(m)?;
    let mut text = LatticeSummary::of(m).line() + "\n";
    for c in &d.components {
        let _ = writeln!(
            text,
            "d = {}: rank {} over Z[zeta_{}], torsion {}, Steinitz {:?}",
            c.d, c.rank, c.d, c.torsion, c.steinitz.class
        );
    }
    for t in &d.mobius_terms {
        let _ = writeln!(text, "mu = {:>2} at d = {}: Z-rank {}, torsion {}", t.mobius, t.d, t.z_rank, t.torsion);
    }
    let _ = writeln!(text, "rank identity: {}", d.rank_identity);
    let _ = writeln!(text, "Mobius rank inversion: {}", d.mobius_rank_inversion);
    let _ = writeln!(text, "diagonal map injective: {}, cokernel {}", d.omega.injective, d.omega.cokernel);
    #[derive(Serialize)]
    struct DecomposeResults<'a> {
        lattice: LatticeSummary,
        decomposition: &'a flasque::flabby::PhiDecomposition,
    }
    Ok(outcome(&DecomposeResults { lattice: LatticeSummary::of(m), decomposition: &d }, text))
}

pub fn dedekind(n: usize) -> Result<Outcome, CliError> {
    let r = cyclotomic_order_maximality(n).map_err(|e| CliError::Parse(e.to_string()))?;
    let mut text = format!("Phi_{n} = {}\n", r.polynomial);
    for c in &r.checks {
        let _ = writeln!(
            text,
            "p = {}: radical {}, cofactor {}, F = {}, gcd {} -> {}",
            c.p,
            c.radical,
            c.cofactor,
            c.quotient,
            c.gcd,
            if c.p_maximal { "p-maximal" } else { "not p-maximal" }
        );
    }
    let _ = writeln!(text, "all maximal: {}", r.all_maximal);
    Ok(outcome(&r, text))
}

pub fn twisted_line(p: Option<u64>, gaussian: bool) -> Result<Outcome, CliError> {
    let r = if gaussian {
        gaussian_twisted_line_counterexample()?
    } else {
        twisted_line_counterexample(p.ok_or_else(|| CliError::Parse("--p or --gaussian is required".into()))?)?
    };
    let mut text = format!("R = {}, group C_{}\n", r.base, r.group_order);
    let _ = writeln!(text, "hypotheses hold: {}", r.hypotheses.all_hold);
    let _ = writeln!(text, "0 -> E -> P -> M -> 0 with Z-ranks {} -> {} -> {}", r.rank_e, r.rank_p, r.rank_m);
    let _ = writeln!(text, "E flabby: {}", r.e_is_flabby);
    let _ = writeln!(text, "H^-1(M) = {}, blocks {:?}", r.h_minus_one_m.invariants, r.h_minus_one_m.blocks);
    let _ = writeln!(text, "H^0(P) = {}, blocks {:?}", r.h_zero_p.invariants, r.h_zero_p.blocks);
    let _ = writeln!(text, "H^0(E) = {}, blocks {:?}", r.h_zero_e.invariants, r.h_zero_e.blocks);
    let _ = writeln!(
        text,
        "length of H^0(E) = {} = {} mod {}; lengths add: {}",
        r.h_zero_e.length, r.length_residue, r.expected_block, r.lengths_add
    );
    let _ = writeln!(text, "verdict: {:?}", r.verdict);
    Ok(outcome(&r, text))
}

pub fn export(m: &GroupLattice) -> Outcome {
    let doc = LatticeDocument::from_lattice(m);
    let text = doc.to_json() + "\n";
    outcome(&doc, text)
}
