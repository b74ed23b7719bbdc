//! End-to-end decision pipeline and its certificate.
//!
//! Stages: rank, `Qd(p)`-freeness, per-prime effective search, family
//! assembly and transport, sphere-model checks. The certificate records every
//! intermediate result as plain data so [`verify_certificate`] can re-check
//! it without repeating the searches.
//!
//! Serialized form: the line `isocert-v1`, then one line of compact JSON
//! with fields in declaration order and maps sorted by key.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::chartab::{ClassFunction, Character};
use crate::cyclotomic::Cyclotomic;
use crate::effective::{
    fusion_certificate, fusion_partition_of, is_fusion_stable, is_p_effective, search_p_effective, EffectiveContext,
    EffectiveSearchSpec, SearchOutcome,
};
use crate::error::{Error, Result};
use crate::family::{assemble_family, compatible_family, verify_compatibility, CompatibleFamily};
use crate::perm::Permutation;
use crate::permgroup::{Isomorphism, PermutationGroup, ScaleLimit, SubgroupHandle};
use crate::pstructure::{
    elementary_abelian_rank, is_qd_free, qd_order, rank_profile, PrimeDecomposition, QdPrimeStatus, QdWitness,
};
use crate::spheremodel::{
    dimension_function, euler_fixed_check, rational_euler_class, verify_rank_one_isotropy, DimensionFunction,
    FixedSphere,
};

pub const FORMAT_TAG: &str = "isocert-v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    RankOne,
    RankTooHigh,
    NotQdFree,
    Certified,
    SearchInconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub order: u64,
    pub degree: usize,
    pub catalog_id: Option<String>,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptionsRecord {
    pub k: u64,
    pub scale_limit: u64,
    /// Dimension bound used at each prime.
    pub bounds: BTreeMap<u64, u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeRankRecord {
    pub p: u64,
    pub rank: u32,
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankRecord {
    pub rank: u32,
    pub per_prime: Vec<PrimeRankRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QdWitnessRecord {
    pub k_generators: Vec<String>,
    pub k_order: u64,
    pub section_degree: usize,
    pub section_order: u64,
    /// Generators of the copy of `Qd(p)` inside the section.
    pub image_generators: Vec<String>,
    /// Isomorphism from the standard `Qd(p)` onto that copy.
    pub qd_generators: Vec<String>,
    pub qd_images: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QdRecord {
    pub p: u64,
    pub status: String,
    pub witness: Option<QdWitnessRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffectiveResultRecord {
    pub dimension: u64,
    pub multiplicities: Vec<u64>,
    /// Character values per Sylow class.
    pub values: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffectiveRecord {
    pub p: u64,
    pub sylow_generators: Vec<String>,
    pub sylow_order: u64,
    pub target_rank: u32,
    pub bound: u64,
    pub class_representatives: Vec<String>,
    pub fusion_blocks: Vec<Vec<usize>>,
    /// `None` when the bound was reached.
    pub result: Option<EffectiveResultRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupRecord {
    pub id: usize,
    pub generators: Vec<String>,
    pub order: u64,
    pub prime: Option<u64>,
    pub conjugator: String,
    pub values: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRecord {
    pub dimension: u64,
    pub scales: BTreeMap<u64, u64>,
    pub subgroups: Vec<SubgroupRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EmptyMarker {
    #[serde(rename = "empty")]
    Empty,
}

/// `"empty"` or the sphere dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DimensionValue {
    Sphere(u64),
    Empty(EmptyMarker),
}

impl From<FixedSphere> for DimensionValue {
    fn from(s: FixedSphere) -> Self {
        match s {
            FixedSphere::Empty => DimensionValue::Empty(EmptyMarker::Empty),
            FixedSphere::Sphere(m) => DimensionValue::Sphere(m),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionRecord {
    pub id: usize,
    pub generators: Vec<String>,
    pub order: u64,
    pub rank: u32,
    pub entry: DimensionValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositeRecord {
    pub element: String,
    pub order: u64,
    /// `(p, p-part, fixed dimension of <p-part>)`.
    pub parts: Vec<(u64, String, u64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagsRecord {
    pub fusion_stable: bool,
    pub p_effective: bool,
    pub compatibility: bool,
    pub rank_one_isotropy: bool,
    pub euler: bool,
    pub rational_euler: bool,
}

impl FlagsRecord {
    pub fn all(&self) -> bool {
        self.fusion_stable
            && self.p_effective
            && self.compatibility
            && self.rank_one_isotropy
            && self.euler
            && self.rational_euler
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub group: GroupRecord,
    pub options: OptionsRecord,
    pub rank: RankRecord,
    pub verdict: Verdict,
    pub notes: Vec<String>,
    pub qd_free: Option<bool>,
    pub qd_report: Vec<QdRecord>,
    pub effective: Vec<EffectiveRecord>,
    pub family: Option<FamilyRecord>,
    pub dimension_function: Vec<DimensionRecord>,
    /// Ids of dimension-function entries with a nonempty fixed sphere.
    pub isotropy: Vec<usize>,
    pub sphere_dimension: Option<u64>,
    pub composite_elements: Vec<CompositeRecord>,
    pub flags: Option<FlagsRecord>,
}

impl Certificate {
    pub fn to_canonical_string(&self) -> String {
        let json = serde_json::to_string(self).expect("certificate records serialize");
        format!("{FORMAT_TAG}\n{json}\n")
    }

    pub fn parse(text: &str) -> Result<Certificate> {
        let (tag, body) = text
            .split_once('\n')
            .ok_or_else(|| Error::Certificate("missing format tag line".into()))?;
        if tag.trim_end() != FORMAT_TAG {
            return Err(Error::Certificate(format!("unsupported format tag `{tag}`")));
        }
        serde_json::from_str(body.trim_end()).map_err(|e| Error::Certificate(e.to_string()))
    }
}

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub k: u64,
    pub limit: ScaleLimit,
    /// Applies to primes absent from `bounds`; `None` means `|G_p|`.
    pub default_bound: Option<u64>,
    pub bounds: BTreeMap<u64, u64>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            k: 1,
            limit: ScaleLimit::default(),
            default_bound: None,
            bounds: BTreeMap::new(),
        }
    }
}

fn strings(perms: &[Permutation]) -> Vec<String> {
    perms.iter().map(ToString::to_string).collect()
}

fn value_strings(chi: &ClassFunction) -> Vec<String> {
    chi.values().iter().map(ToString::to_string).collect()
}

const NOTE_RANK_ONE: &str =
    "rank <= 1: every finite group of rank at most one acts freely on a finite complex homotopy equivalent to a sphere";
const NOTE_RANK_HIGH: &str =
    "rank >= 3: Smith theory forces rank <= 2 for actions on a finite complex homotopy equivalent to a sphere with rank one isotropy";
const NOTE_NOT_FREE: &str = "a p'-involved Qd(p) rules out rank one isotropy";
const NOTE_INCONCLUSIVE: &str =
    "no p-effective character within the dimension bound; this does not prove that none exists";
const NOTE_CERTIFIED: &str = "sphere dimension is 2kn - 1 for the join multiplier k and family dimension n";

pub fn certify(g: &PermutationGroup, catalog_id: Option<&str>, opts: &CertifyOptions) -> Result<Certificate> {
    opts.limit.check("certify", g.order())?;
    if opts.k == 0 {
        return Err(Error::InvalidArgument("join multiplier k must be at least 1".into()));
    }
    let profile = rank_profile(g).map_err(|e| e.at_stage("rank"))?;
    let mut cert = Certificate {
        group: GroupRecord {
            order: g.order(),
            degree: g.degree(),
            catalog_id: catalog_id.map(str::to_string),
            generators: strings(g.generators()),
        },
        options: OptionsRecord {
            k: opts.k,
            scale_limit: opts.limit.0,
            bounds: BTreeMap::new(),
        },
        rank: RankRecord {
            rank: profile.rank,
            per_prime: profile
                .per_prime
                .iter()
                .map(|r| PrimeRankRecord {
                    p: r.p,
                    rank: r.rank,
                    witness: strings(r.witness.generators()),
                })
                .collect(),
        },
        verdict: Verdict::RankOne,
        notes: Vec::new(),
        qd_free: None,
        qd_report: Vec::new(),
        effective: Vec::new(),
        family: None,
        dimension_function: Vec::new(),
        isotropy: Vec::new(),
        sphere_dimension: None,
        composite_elements: Vec::new(),
        flags: None,
    };
    if profile.rank <= 1 {
        cert.notes.push(NOTE_RANK_ONE.into());
        return Ok(cert);
    }
    if profile.rank >= 3 {
        cert.verdict = Verdict::RankTooHigh;
        cert.notes.push(NOTE_RANK_HIGH.into());
        return Ok(cert);
    }

    let qd = is_qd_free(g, opts.limit).map_err(|e| e.at_stage("qd-freeness"))?;
    cert.qd_free = Some(qd.free);
    cert.qd_report = qd.per_prime.iter().map(|(p, s)| qd_record(*p, s)).collect();
    if !qd.free {
        cert.verdict = Verdict::NotQdFree;
        cert.notes.push(NOTE_NOT_FREE.into());
        return Ok(cert);
    }

    let mut per_prime = Vec::new();
    let mut inconclusive = false;
    for p in PrimeDecomposition::of(g.order()).prime_list() {
        let bound = opts.bounds.get(&p).copied().or(opts.default_bound);
        let spec = EffectiveSearchSpec::new(g, p, bound).map_err(|e| e.at_stage("effective-search"))?;
        cert.options.bounds.insert(p, spec.bound);
        let ctx = EffectiveContext::new(spec, opts.limit).map_err(|e| e.at_stage("effective-search"))?;
        let outcome = search_p_effective(&ctx).map_err(|e| e.at_stage("effective-search"))?;
        let sylow = ctx.sylow();
        let mut record = EffectiveRecord {
            p,
            sylow_generators: strings(sylow.generators()),
            sylow_order: sylow.order(),
            target_rank: ctx.spec.target_rank,
            bound: ctx.spec.bound,
            class_representatives: sylow
                .group()
                .conjugacy_classes()
                .classes()
                .iter()
                .map(|c| c.representative.to_string())
                .collect(),
            fusion_blocks: ctx.fusion.blocks().to_vec(),
            result: None,
        };
        match outcome {
            SearchOutcome::Found(found) => {
                record.result = Some(EffectiveResultRecord {
                    dimension: found.dimension,
                    multiplicities: found.multiplicities.clone(),
                    values: value_strings(&found.character),
                });
                per_prime.push((ctx, found.character));
            }
            SearchOutcome::BoundReached { .. } => inconclusive = true,
        }
        cert.effective.push(record);
    }
    if inconclusive {
        cert.verdict = Verdict::SearchInconclusive;
        cert.notes.push(NOTE_INCONCLUSIVE.into());
        return Ok(cert);
    }

    let mut fusion_ok = true;
    let mut effective_ok = true;
    for (ctx, chi) in &per_prime {
        fusion_ok &= is_fusion_stable(chi, &ctx.fusion) && fusion_certificate(chi, g);
        effective_ok &= is_p_effective(chi, ctx).map_err(|e| e.at_stage("effective-search"))?.is_effective();
    }
    let inputs: Vec<(SubgroupHandle, Character)> =
        per_prime.iter().map(|(ctx, chi)| (ctx.sylow().clone(), chi.clone())).collect();
    let base = assemble_family(g, &inputs).map_err(|e| e.at_stage("family"))?;
    let cf = compatible_family(&base, opts.limit).map_err(|e| e.at_stage("family"))?;
    let compatible = verify_compatibility(&cf).map_err(|e| e.at_stage("family"))?.is_none();
    cert.family = Some(family_record(&cf));

    let sphere = |e: Error| e.at_stage("sphere-model");
    let df = dimension_function(&cf, opts.k).map_err(sphere)?;
    let rank_one = verify_rank_one_isotropy(&cf).map_err(sphere)?.is_none();
    let euler = euler_fixed_check(&cf, opts.k).map_err(sphere)?;
    let mut rational = true;
    for entry in base.entries() {
        rational &= rational_euler_class(&entry.character, opts.k).map_err(sphere)?.vanishes();
    }
    let (records, isotropy) = dimension_records(&df);
    cert.dimension_function = records;
    cert.isotropy = isotropy;
    cert.composite_elements = euler
        .composite()
        .map(|c| CompositeRecord {
            element: c.element.to_string(),
            order: c.order,
            parts: c.parts.iter().map(|(p, x, d)| (*p, x.to_string(), *d)).collect(),
        })
        .collect();
    let flags = FlagsRecord {
        fusion_stable: fusion_ok,
        p_effective: effective_ok,
        compatibility: compatible,
        rank_one_isotropy: rank_one,
        euler: euler.holds,
        rational_euler: rational,
    };
    cert.flags = Some(flags);
    if !flags.all() {
        return Err(Error::Certificate(format!("internal verification failed: {flags:?}")).at_stage("verification"));
    }
    cert.verdict = Verdict::Certified;
    cert.sphere_dimension = Some(2 * opts.k * base.dimension() - 1);
    cert.notes.push(NOTE_CERTIFIED.into());
    Ok(cert)
}

fn qd_record(p: u64, status: &QdPrimeStatus) -> QdRecord {
    let witness = match status {
        QdPrimeStatus::Involved(w) => Some(QdWitnessRecord {
            k_generators: strings(w.k.generators()),
            k_order: w.k.order(),
            section_degree: w.section.degree(),
            section_order: w.section.order(),
            image_generators: strings(&w.image_generators),
            qd_generators: strings(&w.isomorphism.generators),
            qd_images: strings(&w.isomorphism.images),
        }),
        _ => None,
    };
    QdRecord {
        p,
        status: status.label().to_string(),
        witness,
    }
}

fn family_record(cf: &CompatibleFamily) -> FamilyRecord {
    FamilyRecord {
        dimension: cf.dimension(),
        scales: cf.base().entries().iter().map(|e| (e.p, e.scale)).collect(),
        subgroups: cf
            .assignments()
            .iter()
            .enumerate()
            .map(|(id, t)| SubgroupRecord {
                id,
                generators: strings(t.subgroup.generators()),
                order: t.subgroup.order(),
                prime: t.p,
                conjugator: t.conjugator.to_string(),
                values: value_strings(&t.character),
            })
            .collect(),
    }
}

fn dimension_records(df: &DimensionFunction) -> (Vec<DimensionRecord>, Vec<usize>) {
    let records: Vec<DimensionRecord> = df
        .entries
        .iter()
        .enumerate()
        .map(|(id, e)| DimensionRecord {
            id,
            generators: strings(e.subgroup.generators()),
            order: e.subgroup.order(),
            rank: e.rank,
            entry: e.sphere.into(),
        })
        .collect();
    let isotropy = df
        .entries
        .iter()
        .enumerate()
        .filter(|(_, e)| e.sphere != FixedSphere::Empty)
        .map(|(id, _)| id)
        .collect();
    (records, isotropy)
}

/// Named pass/fail results of re-checking a certificate.
#[derive(Clone, Debug, Default)]
pub struct VerificationReport {
    pub checks: Vec<(String, bool)>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    fn check(&mut self, name: impl Into<String>, ok: bool) -> bool {
        self.checks.push((name.into(), ok));
        ok
    }
}

fn parse_perms(degree: usize, items: &[String]) -> Result<Vec<Permutation>> {
    items.iter().map(|s| Permutation::parse_cycles(degree, s)).collect()
}

pub fn verify_certificate(cert: &Certificate, g: &PermutationGroup) -> Result<bool> {
    Ok(verify_certificate_report(cert, g)?.passed())
}

/// Re-checks every recorded claim against `g`. Structural mismatches (wrong
/// group, unparsable data) are errors; false claims are failed checks.
pub fn verify_certificate_report(cert: &Certificate, g: &PermutationGroup) -> Result<VerificationReport> {
    let limit = ScaleLimit(cert.options.scale_limit);
    if cert.group.order != g.order() || cert.group.degree != g.degree() {
        return Err(Error::Certificate("certificate describes a different group".into()));
    }
    let gens = parse_perms(g.degree(), &cert.group.generators)?;
    let listed = PermutationGroup::new(g.degree(), gens)?;
    if !listed.same_group(g) {
        return Err(Error::Certificate("certificate generators do not generate the group".into()));
    }
    let mut report = VerificationReport::default();

    let profile = rank_profile(g)?;
    let mut rank_ok = profile.rank == cert.rank.rank && profile.per_prime.len() == cert.rank.per_prime.len();
    for (r, rec) in profile.per_prime.iter().zip(&cert.rank.per_prime) {
        rank_ok &= r.p == rec.p && r.rank == rec.rank;
        let w = SubgroupHandle::new(g, parse_perms(g.degree(), &rec.witness)?);
        rank_ok &= matches!(w, Ok(ref w) if elementary_abelian_rank(w.group(), rec.p) == Some(rec.rank));
    }
    report.check("rank profile", rank_ok);

    match cert.verdict {
        Verdict::RankOne => {
            report.check("rank at most one", profile.rank <= 1);
        }
        Verdict::RankTooHigh => {
            report.check("rank at least three", profile.rank >= 3);
        }
        Verdict::NotQdFree => {
            report.check("rank two", profile.rank == 2);
            report.check("qd report marks involvement", cert.qd_free == Some(false));
            let involved: Vec<&QdRecord> = cert.qd_report.iter().filter(|r| r.witness.is_some()).collect();
            report.check("qd witness present", !involved.is_empty());
            for rec in involved {
                let ok = verify_qd_witness(g, rec, limit)?;
                report.check(format!("qd witness at p = {}", rec.p), ok);
            }
        }
        Verdict::SearchInconclusive | Verdict::Certified => {
            report.check("rank two", profile.rank == 2);
            verify_qd_free_claims(cert, g, &mut report);
            let contexts = verify_effective(cert, g, limit, &mut report)?;
            if cert.verdict == Verdict::SearchInconclusive {
                report.check("some prime reached its bound", cert.effective.iter().any(|r| r.result.is_none()));
            } else {
                verify_family(cert, g, limit, contexts, &mut report)?;
            }
        }
    }
    Ok(report)
}

fn verify_qd_witness(g: &PermutationGroup, rec: &QdRecord, limit: ScaleLimit) -> Result<bool> {
    let w = rec.witness.as_ref().expect("filtered");
    let k = SubgroupHandle::new(g, parse_perms(g.degree(), &w.k_generators)?)?;
    let section = crate::permgroup::section_group(g, &k)?;
    if section.degree() != w.section_degree || section.order() != w.section_order {
        return Ok(false);
    }
    let qd_degree = (rec.p * rec.p) as usize;
    let witness = QdWitness {
        p: rec.p,
        k,
        image_generators: parse_perms(section.degree(), &w.image_generators)?,
        section,
        isomorphism: Isomorphism {
            generators: parse_perms(qd_degree, &w.qd_generators)?,
            images: parse_perms(w.section_degree, &w.qd_images)?,
        },
    };
    Ok(witness.verify(g, limit))
}

/// Pruning claims are arithmetic; "not-involved" claims come from a search
/// and are accepted as recorded.
fn verify_qd_free_claims(cert: &Certificate, g: &PermutationGroup, report: &mut VerificationReport) {
    let odd: Vec<u64> = PrimeDecomposition::of(g.order())
        .prime_list()
        .into_iter()
        .filter(|&p| p != 2)
        .collect();
    let mut ok = cert.qd_free == Some(true) && cert.qd_report.iter().map(|r| r.p).eq(odd.iter().copied());
    for r in &cert.qd_report {
        let target = qd_order(r.p);
        ok &= r.witness.is_none()
            && match r.status.as_str() {
                "pruned-by-order" => target > g.order(),
                "pruned-by-divisibility" => target <= g.order() && !g.order().is_multiple_of(target),
                "not-involved" => g.order().is_multiple_of(target),
                _ => false,
            };
    }
    report.check("qd-freeness claims", ok);
}

/// Re-derives Sylow data and checks each recorded effective character.
fn verify_effective(
    cert: &Certificate,
    g: &PermutationGroup,
    limit: ScaleLimit,
    report: &mut VerificationReport,
) -> Result<Vec<(EffectiveContext, Character)>> {
    let primes = PrimeDecomposition::of(g.order()).prime_list();
    report.check("one effective record per prime", cert.effective.iter().map(|r| r.p).eq(primes.iter().copied()));
    let mut out = Vec::new();
    for rec in &cert.effective {
        let p = rec.p;
        let sylow = SubgroupHandle::new(g, parse_perms(g.degree(), &rec.sylow_generators)?)?;
        let spec = EffectiveSearchSpec::new(g, p, Some(rec.bound))?;
        report.check(format!("p = {p}: target rank"), spec.target_rank == rec.target_rank);
        if !report.check(
            format!("p = {p}: Sylow order"),
            sylow.order() == rec.sylow_order && sylow.order() == PrimeDecomposition::of(g.order()).p_part(p),
        ) {
            continue;
        }
        let reps: Vec<String> = sylow
            .group()
            .conjugacy_classes()
            .classes()
            .iter()
            .map(|c| c.representative.to_string())
            .collect();
        if !report.check(format!("p = {p}: class representatives"), reps == rec.class_representatives) {
            continue;
        }
        let fusion = fusion_partition_of(&sylow)?;
        report.check(
            format!("p = {p}: fusion partition"),
            fusion.verify() && fusion.blocks() == rec.fusion_blocks.as_slice(),
        );
        let Some(result) = &rec.result else {
            continue;
        };
        let ctx = EffectiveContext::with_sylow(spec, sylow, limit)?;
        let e = ctx.table.exponent();
        let values = result
            .values
            .iter()
            .map(|s| Cyclotomic::parse_with_conductor(s, e))
            .collect::<Result<Vec<_>>>()?;
        let chi = ClassFunction::new(ctx.sylow().group(), values)?;
        report.check(format!("p = {p}: fusion brute force"), fusion_certificate(&chi, g));
        report.check(format!("p = {p}: fusion stable"), is_fusion_stable(&chi, &ctx.fusion));
        let mults_ok = ctx.table.decompose(&chi).is_ok_and(|d| {
            d.len() == result.multiplicities.len()
                && d.iter()
                    .zip(&result.multiplicities)
                    .all(|(a, &m)| a.is_integer() && a.to_integer() == m as i64)
        });
        // Later stages need a genuine character.
        if !report.check(format!("p = {p}: multiplicities"), mults_ok) {
            continue;
        }
        let degree_ok = chi.degree() == Some(result.dimension as i64)
            && result.dimension >= 1
            && result.dimension <= rec.bound;
        report.check(format!("p = {p}: dimension"), degree_ok);
        let effective = is_p_effective(&chi, &ctx).map(|r| r.is_effective()).unwrap_or(false);
        report.check(format!("p = {p}: fixed subspaces on maximal-rank E vanish"), effective);
        out.push((ctx, chi));
    }
    Ok(out)
}

fn verify_family(
    cert: &Certificate,
    g: &PermutationGroup,
    limit: ScaleLimit,
    contexts: Vec<(EffectiveContext, Character)>,
    report: &mut VerificationReport,
) -> Result<()> {
    let k = cert.options.k;
    let Some(fam_rec) = &cert.family else {
        report.check("family present", false);
        return Ok(());
    };
    if !report.check("effective character at every prime", contexts.len() == cert.effective.len()) {
        return Ok(());
    }
    let inputs: Vec<(SubgroupHandle, Character)> =
        contexts.iter().map(|(ctx, chi)| (ctx.sylow().clone(), chi.clone())).collect();
    let base = assemble_family(g, &inputs)?;
    let n = base.dimension();
    let lcm = cert
        .effective
        .iter()
        .filter_map(|r| r.result.as_ref())
        .fold(1u64, |acc, r| acc.lcm(&r.dimension));
    report.check("family dimension is the lcm", fam_rec.dimension == n && n == lcm);
    let scales: BTreeMap<u64, u64> = base.entries().iter().map(|e| (e.p, e.scale)).collect();
    report.check("family scales", scales == fam_rec.scales);

    let cf = compatible_family(&base, limit)?;
    let expected = family_record(&cf);
    report.check("transported characters", expected.subgroups == fam_rec.subgroups);
    report.check("compatibility", verify_compatibility(&cf)?.is_none());

    let df = dimension_function(&cf, k)?;
    let (records, isotropy) = dimension_records(&df);
    report.check("dimension function", records == cert.dimension_function);
    report.check("isotropy", isotropy == cert.isotropy);
    report.check("dimension function monotone", df.is_monotone());
    report.check("rank one isotropy", verify_rank_one_isotropy(&cf)?.is_none());
    let euler = euler_fixed_check(&cf, k)?;
    report.check("euler characteristics", euler.holds);
    let composite: Vec<CompositeRecord> = euler
        .composite()
        .map(|c| CompositeRecord {
            element: c.element.to_string(),
            order: c.order,
            parts: c.parts.iter().map(|(p, x, d)| (*p, x.to_string(), *d)).collect(),
        })
        .collect();
    report.check("composite element report", composite == cert.composite_elements);
    let mut rational = true;
    for entry in base.entries() {
        rational &= rational_euler_class(&entry.character, k)?.vanishes();
    }
    report.check("rational euler class", rational);
    report.check("sphere dimension", cert.sphere_dimension == Some(2 * k * n - 1));
    report.check("flags", cert.flags.is_some_and(|f| f.all()));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::catalog_group;

    fn run(id: &str) -> Certificate {
        certify(&catalog_group(id).unwrap(), Some(id), &CertifyOptions::default()).unwrap()
    }

    #[test]
    fn verdicts() {
        assert_eq!(run("trivial").verdict, Verdict::RankOne);
        assert_eq!(run("Cn:6").verdict, Verdict::RankOne);
        assert_eq!(run("Q8").verdict, Verdict::RankOne);
        let a4 = run("A4");
        assert_eq!(a4.verdict, Verdict::Certified);
        assert_eq!(a4.sphere_dimension, Some(5));
        assert_eq!(a4.family.as_ref().unwrap().dimension, 3);
        let iso_orders: Vec<u64> = a4.isotropy.iter().map(|&i| a4.dimension_function[i].order).collect();
        assert_eq!(iso_orders, vec![1, 2]);
    }

    #[test]
    fn round_trip_and_verify() {
        for id in ["trivial", "A4", "D2n:3"] {
            let g = catalog_group(id).unwrap();
            let cert = certify(&g, Some(id), &CertifyOptions::default()).unwrap();
            let text = cert.to_canonical_string();
            assert!(text.starts_with("isocert-v1\n{"));
            let back = Certificate::parse(&text).unwrap();
            assert_eq!(back, cert);
            assert_eq!(back.to_canonical_string(), text);
            assert!(verify_certificate(&back, &g).unwrap(), "{id}");
        }
    }

    #[test]
    fn tampered_value_fails() {
        let g = catalog_group("A4").unwrap();
        let mut cert = certify(&g, Some("A4"), &CertifyOptions::default()).unwrap();
        let values = &mut cert.effective[0].result.as_mut().unwrap().values;
        values[1] = "0".into();
        assert!(!verify_certificate(&cert, &g).unwrap());

        let mut cert = certify(&g, Some("A4"), &CertifyOptions::default()).unwrap();
        cert.dimension_function[2].entry = DimensionValue::Sphere(1);
        assert!(!verify_certificate(&cert, &g).unwrap());

        let s4 = catalog_group("S4").unwrap();
        assert!(matches!(verify_certificate(&cert, &s4), Err(Error::Certificate(_))));
    }

    #[test]
    fn parse_rejects_bad_tag() {
        assert!(Certificate::parse("isocert-v0\n{}").is_err());
        assert!(Certificate::parse("isocert-v1\n{").is_err());
    }
}
