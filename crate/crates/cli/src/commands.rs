//! Executes parsed commands. Every command is a pure function of its
//! arguments and input files, which makes manifests replayable.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigUint;
use regreal::dfa::Combine;
use regreal::digraph::{build_counting_digraph, build_lrs_digraph};
use regreal::filters::{brute_realizability, parse_block_word, BruteLimits, BruteOutcome};
use regreal::formats::{self, HitInstance};
use regreal::fwd::{
    chp_to_pb, lrs_to_automata_pair, lrs_to_automata_pair_with_length, zurc_to_pepe, ZurcInstance,
};
use regreal::hitting::{
    chp_odp_roundtrip, orbit_scan_threads, Complement, OrbitProblem, RoundtripInput, ScanOutcome,
};
use regreal::lattice::{
    hilbert_basis, ihp_to_php, integral_caratheodory, lattice_hitting_set, smith_normal_form,
    wwhp_to_ihp, BoundedPhpScan, Verdict,
};
use regreal::monoid::{reverse_reduction, HitRelation};
use regreal::shadow::{decide, decide_hit};
use regreal::verify::{run_suite, suite_id, SUITES};
use regreal::{Error, Result};
use sha2::{Digest, Sha256};

use crate::args::*;
use crate::output::{Answer, Outcome};

pub fn sha256(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Inputs read and parameters chosen during one run.
#[derive(Default)]
pub struct Ctx {
    pub inputs: Vec<(String, String)>,
    pub threads: usize,
    pub seed: u64,
}

impl Ctx {
    fn read(&mut self, path: &Path) -> Result<String> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
        self.inputs
            .push((path.display().to_string(), sha256(text.as_bytes())));
        Ok(text)
    }
}

fn yes_no(b: bool) -> Answer {
    if b {
        Answer::Yes
    } else {
        Answer::No
    }
}

fn ints(v: &[regreal::Int]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn execute(cmd: &Command, ctx: &mut Ctx) -> Result<Outcome> {
    match cmd {
        Command::Lrs(c) => lrs(c, ctx),
        Command::Digraph(c) => digraph(c, ctx),
        Command::Dfa(c) => dfa(c, ctx),
        Command::Reduce(c) => reduce(c, ctx),
        Command::Filter(c) => filter(c, ctx),
        Command::Lattice(c) => lattice(c, ctx),
        Command::Decide(c) => decide_cmd(c, ctx),
        Command::Hit(c) => hit(c, ctx),
        Command::Verify { suite } => verify(suite, ctx),
        Command::Replay { .. } => unreachable!("replay is handled by the caller"),
    }
}

fn lrs(c: &LrsCmd, ctx: &mut Ctx) -> Result<Outcome> {
    let mut out = Outcome::default();
    match c {
        LrsCmd::Eval { file, n, count } => {
            let s = formats::parse_lrs(&ctx.read(file)?)?;
            out.result = Some(s.eval(*n).to_string());
            for i in 1..*count {
                out.field(format!("x_{}", n + i), s.eval(n + i));
            }
        }
        LrsCmd::Scale { file } => {
            let s = formats::parse_lrs(&ctx.read(file)?)?;
            let (y, big_n) = s.scale_to_integer();
            out.result = Some(big_n.to_string());
            out.param("N", &big_n);
            out.artifact("scaled.lrs", y.to_string());
        }
        LrsCmd::ToPair { file, ell } => {
            let s = formats::parse_lrs(&ctx.read(file)?)?;
            let p = match ell {
                Some(l) => lrs_to_automata_pair_with_length(&s, *l)?,
                None => lrs_to_automata_pair(&s)?,
            };
            for (k, v) in [("ell", p.ell), ("M", p.m), ("k", p.k)] {
                out.param(k, v);
                out.field(k, v);
            }
            out.field("states_a", p.a.states());
            out.field("states_b", p.b.states());
            out.artifact("a.dfa", formats::write_dfa(&p.a));
            out.artifact("b.dfa", formats::write_dfa(&p.b));
        }
    }
    Ok(out)
}

fn digraph(c: &DigraphCmd, ctx: &mut Ctx) -> Result<Outcome> {
    let mut out = Outcome::default();
    match c {
        DigraphCmd::BuildLrs { file } => {
            let s = formats::parse_lrs(&ctx.read(file)?)?;
            let g = build_lrs_digraph(&s)?;
            out.field("vertices", g.vertices);
            out.artifact("lrs.digraph", formats::write_weighted_digraph(&g));
        }
        DigraphCmd::BuildCount { n, k } => {
            let n = BigUint::from_str(n)
                .map_err(|_| Error::Invalid(format!("{n:?} is not a natural number")))?;
            out.param("n", &n);
            out.param("k", k);
            let g = build_counting_digraph(&n, *k)?;
            out.field("vertices", g.vertices);
            out.artifact("count.digraph", formats::write_weighted_digraph(&g));
        }
        DigraphCmd::Walksum { file, n } => {
            let g = formats::parse_weighted_digraph(&ctx.read(file)?)?;
            out.result = Some(g.walk_weight_sum(*n).to_string());
        }
    }
    Ok(out)
}

fn dfa(c: &DfaCmd, ctx: &mut Ctx) -> Result<Outcome> {
    let mut out = Outcome::default();
    match c {
        DfaCmd::Count { file, n } => {
            let a = formats::parse_dfa(&ctx.read(file)?)?;
            out.result = Some(a.count_words(*n).to_string());
        }
        DfaCmd::Combine { a, b, mode } => {
            let a = formats::parse_dfa(&ctx.read(a)?)?;
            let b = formats::parse_dfa(&ctx.read(b)?)?;
            let mode = match mode {
                CombineMode::And => Combine::And,
                CombineMode::Or => Combine::Or,
                CombineMode::Diff => Combine::Diff,
            };
            let c = a.combine(&b, mode)?;
            out.field("states", c.states());
            out.artifact("combined.dfa", formats::write_dfa(&c));
        }
        DfaCmd::Run { file, word } => {
            let a = formats::parse_dfa(&ctx.read(file)?)?;
            out.verdict(yes_no(a.run_str(word)?));
        }
    }
    Ok(out)
}

fn relation(r: RelationArg) -> HitRelation {
    match r {
        RelationArg::Exact => HitRelation::Exact,
        RelationArg::Down => HitRelation::Down,
        RelationArg::Up => HitRelation::Up,
    }
}

fn reduce(c: &ReduceCmd, ctx: &mut Ctx) -> Result<Outcome> {
    let mut out = Outcome::default();
    match c {
        ReduceCmd::ChpToPb { file } => {
            let inst = formats::parse_constraint_instance(&ctx.read(file)?)?;
            let red = chp_to_pb(&inst)?;
            out.param("ell", red.ell);
            out.param("prefix", red.prefix);
            for (i, c) in red.constraints.iter().enumerate() {
                out.param(format!("M_{}", i + 1), c.m);
                out.param(format!("k_{}", i + 1), c.k);
            }
            out.field("states", red.automaton.states());
            out.artifact("pb.dfa", formats::write_dfa(&red.automaton));
            out.artifact("reduction.txt", format!("{}file pb.dfa\n", red.manifest()));
        }
        ReduceCmd::PbToWwhp { file, relation: r } => {
            let a = formats::parse_dfa(&ctx.read(file)?)?;
            let red = reverse_reduction(&a)?;
            let insts = red.instances(relation(*r));
            out.field("monoid", red.monoid.size());
            out.field("carrier", red.system.dim());
            out.field("instances", insts.len());
            for (i, inst) in insts.iter().enumerate() {
                out.artifact(format!("wwhp-{}.txt", i + 1), formats::write_wwhp(inst));
            }
        }
        ReduceCmd::WwhpToIhp { file } => {
            let inst = formats::parse_wwhp(&ctx.read(file)?)?;
            let ihps = wwhp_to_ihp(&inst)?;
            out.field("instances", ihps.len());
            for (i, x) in ihps.iter().enumerate() {
                out.artifact(format!("ihp-{}.txt", i + 1), formats::write_ihp(x));
            }
        }
        ReduceCmd::IhpToPhp {
            file,
            bound,
            budget,
        } => {
            let inst = formats::parse_ihp(&ctx.read(file)?)?;
            out.param("bound", bound);
            out.param("budget", budget);
            let v = ihp_to_php(&inst, &BoundedPhpScan { bound: *bound }, *budget)?;
            verdict_fields(&mut out, &v);
        }
        ReduceCmd::ZurcToPepe { file } => {
            let ms = formats::parse_zmatrices(&ctx.read(file)?)?;
            let inst = ZurcInstance::new(ms.clone())?;
            let a = zurc_to_pepe(&ms)?;
            out.param("bits", inst.bits());
            out.field("states", a.states());
            out.field("alphabet", a.alphabet().len());
            out.artifact("pepe.dfa", formats::write_dfa(&a));
        }
    }
    Ok(out)
}

fn verdict_fields(out: &mut Outcome, v: &Verdict) {
    match v {
        Verdict::Yes { n } => {
            out.verdict(Answer::Yes);
            out.field("n", n);
        }
        Verdict::No => out.verdict(Answer::No),
        Verdict::NoWithinBound { bound } => {
            out.verdict(Answer::Unknown);
            out.field("no-hit-within", bound);
        }
        Verdict::Unknown { reason } => {
            out.verdict(Answer::Unknown);
            out.field("reason", reason);
        }
    }
}

fn filter(c: &FilterCmd, ctx: &mut Ctx) -> Result<Outcome> {
    let mut out = Outcome::default();
    match c {
        FilterCmd::Check {
            filter,
            word,
            alphabet,
        } => {
            let alphabet: Vec<String> = alphabet.split_whitespace().map(String::from).collect();
            match parse_block_word(word) {
                Ok(w) => {
                    out.verdict(yes_no(filter.contains(&w, &alphabet)));
                    out.field("rank", w.rank);
                    out.field("blocks", w.count());
                }
                Err(e) => {
                    out.verdict(Answer::No);
                    out.field("reason", e);
                }
            }
        }
        FilterCmd::Brute {
            filter,
            file,
            max_rank,
            budget,
            slack,
        } => {
            let a = formats::parse_dfa(&ctx.read(file)?)?;
            out.param("max_rank", max_rank);
            out.param("budget", budget);
            out.param("slack", slack);
            match brute_realizability(
                &a,
                *filter,
                BruteLimits {
                    max_rank: *max_rank,
                    budget: *budget,
                    slack: *slack,
                },
            )? {
                BruteOutcome::Witness { word, rank } => {
                    out.verdict(Answer::Yes);
                    out.field("rank", rank);
                    out.field("witness", word);
                }
                BruteOutcome::Exhausted { max_rank } => {
                    out.verdict(Answer::Unknown);
                    out.field("none-up-to-rank", max_rank);
                }
            }
        }
    }
    Ok(out)
}

fn lattice(c: &LatticeCmd, ctx: &mut Ctx) -> Result<Outcome> {
    let mut out = Outcome::default();
    match c {
        LatticeCmd::Snf { file } => {
            let m = formats::parse_zmatrix(&ctx.read(file)?)?;
            let s = smith_normal_form(&m);
            out.result = Some(ints(&s.invariant_factors()));
            out.artifact(
                "snf.txt",
                format!(
                    "# U\n{}# D\n{}# V\n{}",
                    formats::write_zmatrix(&s.u),
                    formats::write_zmatrix(&s.d),
                    formats::write_zmatrix(&s.v)
                ),
            );
        }
        LatticeCmd::Hilbert { file, budget } => {
            let cone = formats::parse_cone(&ctx.read(file)?)?;
            out.param("budget", budget);
            let hb = hilbert_basis(&cone.generators, *budget)?;
            out.field("points", hb.len());
            for p in &hb {
                out.field("point", ints(p));
            }
        }
        LatticeCmd::Caratheodory { file, budget } => {
            let cone = formats::parse_cone(&ctx.read(file)?)?;
            out.param("budget", budget);
            let d = integral_caratheodory(&cone, *budget)?;
            out.field("bound", &d.bound);
            out.field("points", d.points.len());
            out.field("cones", d.cones.len());
            let mut text = String::new();
            for p in &d.points {
                text += &format!("point {}\n", ints(p));
            }
            for c in &d.cones {
                text += &c.to_string();
            }
            out.artifact("decomposition.txt", text);
        }
        LatticeCmd::Hitset { file } => {
            let o = formats::parse_lattice_orbit(&ctx.read(file)?)?;
            let h = lattice_hitting_set(&o.phi, &o.x0, &o.v0, &o.gens)?;
            out.verdict(yes_no(!h.is_empty()));
            out.artifact("hitset.txt", h.to_string());
        }
    }
    Ok(out)
}

fn decide_cmd(c: &DecideCmd, ctx: &mut Ctx) -> Result<Outcome> {
    let mut out = Outcome::default();
    match c {
        DecideCmd::Inj { file } | DecideCmd::Sur { file } => {
            let a = formats::parse_dfa(&ctx.read(file)?)?;
            let f = if matches!(c, DecideCmd::Inj { .. }) {
                regreal::filters::Filter::Injective
            } else {
                regreal::filters::Filter::Surjective
            };
            let d = decide(&a, f)?;
            out.verdict(yes_no(d.verdict));
            // Decision lines are `key value...`; the verdict is already the result.
            for line in d.to_string().lines().filter(|l| !l.starts_with("verdict ")) {
                let (k, v) = line.split_once(' ').unwrap_or((line, ""));
                out.field(k, v);
            }
        }
        DecideCmd::Up { file } | DecideCmd::Down { file } => {
            let mut inst = formats::parse_wwhp(&ctx.read(file)?)?;
            inst.relation = if matches!(c, DecideCmd::Up { .. }) {
                HitRelation::Up
            } else {
                HitRelation::Down
            };
            let d = decide_hit(&inst)?;
            out.verdict(yes_no(d.verdict));
            out.field("rank", d.rank.map_or("none".to_string(), |n| n.to_string()));
            out.field("examined", d.examined);
        }
    }
    Ok(out)
}

fn hit(c: &HitCmd, ctx: &mut Ctx) -> Result<Outcome> {
    let mut out = Outcome::default();
    match c {
        HitCmd::Scan { file, bound } => {
            let inst = formats::parse_hit_instance(&ctx.read(file)?)?;
            out.param("bound", bound);
            let (p, universal): (&(dyn OrbitProblem + Sync), bool) = match &inst {
                HitInstance::Chp(x) => (x, false),
                HitInstance::Shp(x) => (x, false),
                HitInstance::Odp(x) => (x, true),
                HitInstance::Plp(x) => (x, true),
            };
            let r = orbit_scan_threads(p, *bound, ctx.threads);
            // ODP and PLP ask whether the orbit always stays inside, so a
            // hit is a violation.
            match (r, universal) {
                (ScanOutcome::Hit(n), false) => {
                    out.verdict(Answer::Yes);
                    out.field("n", n);
                }
                (ScanOutcome::Hit(n), true) => {
                    out.verdict(Answer::No);
                    out.field("violation", n);
                }
                (ScanOutcome::NoHitWithin(b), _) => {
                    out.verdict(Answer::Unknown);
                    out.field(
                        if universal {
                            "no-violation-within"
                        } else {
                            "no-hit-within"
                        },
                        b,
                    );
                }
            }
        }
        HitCmd::Roundtrip { file } => {
            let inst = formats::parse_hit_instance(&ctx.read(file)?)?;
            let input = match &inst {
                HitInstance::Chp(x) => RoundtripInput::Chp(x),
                HitInstance::Odp(x) => RoundtripInput::Odp(x),
                _ => {
                    return Err(Error::Invalid(
                        "roundtrip needs a chamber or description instance".into(),
                    ))
                }
            };
            match chp_odp_roundtrip(input)? {
                Complement::Odp(o) => {
                    out.field("patterns", o.patterns.len());
                    out.artifact("odp.txt", formats::write_hit_instance(&HitInstance::Odp(o)));
                }
                Complement::Chps(cs) => {
                    out.field("chambers", cs.len());
                    for (i, c) in cs.into_iter().enumerate() {
                        out.artifact(
                            format!("chp-{}.txt", i + 1),
                            formats::write_hit_instance(&HitInstance::Chp(c)),
                        );
                    }
                }
            }
        }
    }
    Ok(out)
}

fn verify(suite: &str, ctx: &mut Ctx) -> Result<Outcome> {
    let ids: Vec<u8> = if suite == "all" {
        SUITES.iter().map(|(i, _)| *i).collect()
    } else {
        vec![suite_id(suite).ok_or_else(|| Error::Invalid(format!("no suite {suite:?}")))?]
    };
    let mut out = Outcome::default();
    out.param("seed", ctx.seed);
    let threads = ctx.threads.max(1);
    let seed = ctx.seed;
    // Suites run in parallel; reports keep suite order.
    let mut reports = Vec::new();
    for chunk in ids.chunks(threads) {
        let part: Vec<_> = std::thread::scope(|s| {
            let hs: Vec<_> = chunk
                .iter()
                .map(|&id| s.spawn(move || run_suite(id, seed)))
                .collect();
            hs.into_iter()
                .map(|h| h.join().expect("suite panicked"))
                .collect()
        });
        reports.extend(part);
    }
    let mut all = true;
    for r in reports {
        let r = r?;
        all &= r.passed();
        eprintln!("criterion {} {:.2}s", r.id, r.elapsed.as_secs_f64());
        out.field(
            "criterion",
            format!(
                "{} {} {} checks {} failures {}",
                r.id,
                if r.passed() { "PASS" } else { "FAIL" },
                r.name,
                r.checks,
                r.failures.len()
            ),
        );
        for f in &r.failures {
            out.field("failure", format!("{} {f}", r.id));
        }
    }
    out.verdict(yes_no(all));
    Ok(out)
}
