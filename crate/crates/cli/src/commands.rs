use std::collections::BTreeSet;
use std::fs;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sfs_fill::cf::{cf_expand, dual_chain, truncation_values};
use sfs_fill::fillability::{decide_with_limit, sublink_book, Obstruction, Status};
use sfs_fill::presentation::enumerate_structures;
use sfs_fill::{
    ab_class, daisy_rewrite, find_sublinks, obstruction_trace, positive_feasible, translate, verify_certificate,
    Chain, Hole, OpenBook, Presentation, Rational, SignedTwist,
};

use crate::{Command, Common, Failure, Format, StatusFilter};

type Outcome = Result<(), Failure>;

pub fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Cf(c) => cf(&c),
        Command::Translate { common, reroot } => translate_cmd(&common, reroot.as_deref()),
        Command::Decide(c) => decide_cmd(&c),
        Command::Oracle(c) => oracle(&c),
        Command::Factorize(c) => factorize(&c),
        Command::Trace(c) => trace(&c),
        Command::Survey { common, status } => survey(&common, status),
        Command::Verify(c) => verify(&c),
    }
}

fn read_input(c: &Common) -> Result<String, Failure> {
    match (&c.input, &c.json) {
        (Some(path), None) => {
            fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
        }
        (None, Some(text)) => Ok(text.clone()),
        _ => Err(Failure::Input("give exactly one of --input or --json".into())),
    }
}

fn parse<T: for<'de> Deserialize<'de>>(c: &Common) -> Result<T, Failure> {
    serde_json::from_str(&read_input(c)?).map_err(Failure::input)
}

fn presentation(c: &Common) -> Result<Presentation, Failure> {
    Presentation::from_json(&read_input(c)?).map_err(Failure::input)
}

fn limit(c: &Common) -> usize {
    if c.force {
        usize::MAX
    } else {
        c.max_holes
    }
}

/// JSON is pretty-printed; text is whatever the caller renders.
fn emit(c: &Common, value: &impl Serialize, text: impl FnOnce() -> String) -> Outcome {
    match c.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?),
        Format::Text => print!("{}", text()),
    }
    Ok(())
}

fn names(holes: &BTreeSet<Hole>) -> String {
    let v: Vec<String> = holes.iter().map(Hole::to_string).collect();
    format!("{{{}}}", v.join(", "))
}

fn twist_line(t: &SignedTwist) -> String {
    format!("{} {}", if t.sign.value() > 0 { "+" } else { "-" }, names(&t.holes))
}

fn book_text(b: &OpenBook) -> String {
    let mut out = format!("outer {}, {} holes\n", b.outer(), b.universe().len());
    for t in b.twists() {
        out += &format!("  {}\n", twist_line(t));
    }
    out
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CfInput {
    Chain { coeffs: Vec<i64> },
    Value { value: Rational },
    R { r: Rational },
}

fn cf(c: &Common) -> Outcome {
    let chain = match parse::<CfInput>(c)? {
        CfInput::Chain { coeffs } => Chain::new(coeffs).map_err(Failure::input)?,
        CfInput::Value { value } => cf_expand(&value).map_err(Failure::input)?,
        CfInput::R { r } => {
            if r <= Rational::zero() || r >= Rational::one() {
                return Err(Failure::Input(format!("r in (0,1) (r = {r})")));
            }
            cf_expand(&-r.checked_recip().expect("r > 0")).map_err(Failure::input)?
        }
    };
    let dual = dual_chain(&chain)?;
    let report = json!({
        "coeffs": chain,
        "value": chain.value(),
        "s": chain.s(),
        "truncations": truncation_values(&chain),
        "dual": dual,
    });
    emit(c, &report, || {
        let t: Vec<String> = truncation_values(&chain).iter().map(|x| x.to_string()).collect();
        format!(
            "chain {:?}\nvalue {}\ns {}\ntruncations {}\ndual {:?}\n",
            chain,
            chain.value(),
            chain.s(),
            t.join(" "),
            dual
        )
    })
}

fn translate_cmd(c: &Common, reroot: Option<&str>) -> Outcome {
    let p = presentation(c)?;
    let mut book = translate(&p);
    if let Some(h) = reroot {
        let hole: Hole = h.parse().map_err(Failure::input)?;
        book = book.reroot(hole)?;
    }
    emit(c, &book, || book_text(&book))
}

fn verdict_text(v: &sfs_fill::Verdict) -> String {
    let mut out = format!("{:?}\n", v.status);
    if let Some(s) = &v.sublink {
        out += &format!(
            "sublink: positive leg {} (first {}), negative leg {} (first {}), s = {} + {}\n",
            s.positive_leg, s.trunc_pos, s.negative_leg, s.trunc_neg, s.s_pos, s.s_neg
        );
    }
    if let Some(g) = &v.geometric_certificate {
        out += &format!("sublink factorization: {} positive twists\n", g.len());
        for t in g {
            out += &format!("  {}\n", twist_line(t));
        }
    }
    match &v.abelian_certificate {
        Some(a) => out += &format!("full book: {:?}\n", a.status),
        None if v.is_fillable() => out += "full book: search skipped above the hole limit\n",
        None => {}
    }
    match &v.obstruction {
        Some(Obstruction::FailedOppositeCheck) => out += "obstruction: no pair of oppositely stabilized legs\n",
        Some(Obstruction::NoQualifyingPair { q_values }) => {
            let q: Vec<String> = q_values.iter().map(|x| x.to_string()).collect();
            out += &format!("obstruction: no opposite pair with q-sum >= 1 (q = {})\n", q.join(", "));
        }
        Some(Obstruction::TraceObstruction { trace }) => {
            out += &format!("obstruction: level trace, {} levels, {:?}\n", trace.levels.len(), trace.conclusion);
        }
        None => {}
    }
    out
}

fn oracle_verdict(p: &Presentation, max_holes: usize) -> Result<bool, Failure> {
    Ok(positive_feasible(&ab_class(&translate(p)), max_holes)?.is_feasible())
}

fn decide_cmd(c: &Common) -> Outcome {
    let p = presentation(c)?;
    let v = decide_with_limit(&p, limit(c))?;
    emit(c, &v, || verdict_text(&v))?;
    if c.cross_check && oracle_verdict(&p, limit(c))? != v.is_fillable() {
        return Err(Failure::Internal("verdict disagrees with the feasibility search".into()));
    }
    Ok(())
}

fn oracle(c: &Common) -> Outcome {
    let p = presentation(c)?;
    let class = ab_class(&translate(&p));
    let result = positive_feasible(&class, limit(c))?;
    let report = json!({ "class": class, "result": result });
    emit(c, &report, || {
        let mut out = format!("{:?}\n", result.status);
        for w in result.witness.iter().flatten() {
            out += &format!("  {} x {}\n", w.multiplicity, names(&w.holes));
        }
        out
    })
}

fn factorize(c: &Common) -> Outcome {
    let p = presentation(c)?;
    let choice = find_sublinks(&p)
        .into_iter()
        .next()
        .ok_or_else(|| Failure::Input("precondition violated: no fillable sublink".into()))?;
    let sub = sublink_book(&p, &choice)?;
    let tr = daisy_rewrite(&sub)?;
    if !verify_certificate(sub.book(), &tr.twists)? {
        return Err(Failure::Internal("factorization does not verify".into()));
    }
    let report = json!({ "sublink": choice, "book": sub.book(), "trace": tr });
    emit(c, &report, || {
        let mut out = format!("b = {:?}\n", tr.bpattern.runs);
        for s in &tr.steps {
            out += &format!("step {}: D = {}", s.level, names(&s.d));
            if let Some(n) = &s.n {
                out += &format!(", N = -{}", names(n));
            }
            if let Some(n) = &s.n_prime {
                out += &format!(", N' = -{}", names(n));
            }
            out += "\n";
        }
        out += &format!("{} positive twists\n", tr.twists.len());
        for t in &tr.twists {
            out += &format!("  {}\n", twist_line(t));
        }
        out
    })
}

fn trace(c: &Common) -> Outcome {
    let p = presentation(c)?;
    let t = obstruction_trace(&p);
    emit(c, &t, || {
        let mut out = format!("{:?}\n", t.conclusion);
        if let Some(r) = &t.role_assignment {
            out += &format!(
                "roles: third {}, first {}, second {}{}\n",
                r.third,
                r.first,
                r.second,
                if r.flipped { ", flipped" } else { "" }
            );
        }
        for l in &t.levels {
            out += &format!("  J = {}: need {}, partitions {:?}, case {:?}\n", l.j, l.need, l.partitions, l.case);
        }
        out
    })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SurveyInput {
    Chains { chains: Vec<Chain> },
    Values { r: Vec<Rational> },
    Family { family: Family },
}

/// Unordered chain triples with entries in `min_entry..=-2` and total length
/// at most `max_total`.
#[derive(Deserialize)]
struct Family {
    min_entry: i64,
    max_total: usize,
}

fn family(f: &Family) -> Result<Vec<[Chain; 3]>, Failure> {
    if f.min_entry > -2 || f.max_total < 3 {
        return Err(Failure::Input("family needs min_entry <= -2 and max_total >= 3".into()));
    }
    let mut chains: Vec<Vec<i64>> = vec![];
    let mut layer: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..f.max_total - 2 {
        layer = layer
            .iter()
            .flat_map(|c| (f.min_entry..=-2).map(move |a| [c.clone(), vec![a]].concat()))
            .collect();
        chains.extend(layer.iter().cloned());
    }
    let mut out = Vec::new();
    for a in 0..chains.len() {
        for b in a..chains.len() {
            for c in b..chains.len() {
                if chains[a].len() + chains[b].len() + chains[c].len() <= f.max_total {
                    let ch = |v: &Vec<i64>| Chain::new(v.clone()).expect("entries <= -2");
                    out.push([ch(&chains[a]), ch(&chains[b]), ch(&chains[c])]);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct Record {
    index: usize,
    chains: Vec<Chain>,
    rotations: Vec<Vec<i64>>,
    status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    sublink: Option<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_feasible: Option<bool>,
}

fn survey(c: &Common, filter: Option<StatusFilter>) -> Outcome {
    let manifolds: Vec<[Chain; 3]> = match parse::<SurveyInput>(c)? {
        SurveyInput::Chains { chains } => vec![chains
            .try_into()
            .map_err(|v: Vec<Chain>| Failure::Input(format!("exactly three legs (got {})", v.len())))?],
        SurveyInput::Values { r } => {
            let chains = r
                .iter()
                .map(|x| {
                    if *x <= Rational::zero() || *x >= Rational::one() {
                        return Err(Failure::Input(format!("r in (0,1) (r = {x})")));
                    }
                    cf_expand(&-x.checked_recip().expect("r > 0")).map_err(Failure::input)
                })
                .collect::<Result<Vec<_>, _>>()?;
            vec![chains
                .try_into()
                .map_err(|v: Vec<Chain>| Failure::Input(format!("exactly three legs (got {})", v.len())))?]
        }
        SurveyInput::Family { family: f } => family(&f)?,
    };
    let structures: Vec<Presentation> = manifolds.iter().flat_map(enumerate_structures).collect();
    let max = limit(c);
    if c.cross_check && !c.force {
        if let Some(p) = structures.iter().find(|p| translate(p).universe().len() - 1 > max) {
            return Err(Failure::Input(format!(
                "a book has {} holes, above the limit of {max}; pass --force to search anyway",
                translate(p).universe().len() - 1
            )));
        }
    }

    let records: Vec<Result<Record, Failure>> = structures
        .par_iter()
        .enumerate()
        .map(|(index, p)| {
            let v = decide_with_limit(p, max)?;
            let oracle_feasible = if c.cross_check {
                Some(oracle_verdict(p, max)?)
            } else {
                None
            };
            Ok(Record {
                index,
                chains: p.legs().iter().map(|l| l.coefficients().clone()).collect(),
                rotations: p.legs().iter().map(|l| l.rotations().to_vec()).collect(),
                status: v.status,
                sublink: v.sublink.map(|s| (s.positive_leg, s.negative_leg)),
                oracle_feasible,
            })
        })
        .collect();

    let (mut fillable, mut not_fillable, mut agree, mut disagree) = (0usize, 0usize, 0usize, 0usize);
    for r in records {
        let r = r?;
        let is_fill = r.status == Status::Fillable;
        if is_fill {
            fillable += 1;
        } else {
            not_fillable += 1;
        }
        if let Some(f) = r.oracle_feasible {
            if f == is_fill {
                agree += 1;
            } else {
                disagree += 1;
            }
        }
        let show = match filter {
            Some(StatusFilter::Fillable) => is_fill,
            Some(StatusFilter::NotFillable) => !is_fill,
            None => true,
        };
        if show {
            match c.format {
                Format::Json => println!("{}", serde_json::to_string(&r).map_err(|e| Failure::Internal(e.to_string()))?),
                Format::Text => {
                    let mut line = format!("{:>6} {:?} rot {:?} {:?}", r.index, r.chains, r.rotations, r.status);
                    if let Some((i, j)) = r.sublink {
                        line += &format!(" via ({i},{j})");
                    }
                    if let Some(f) = r.oracle_feasible {
                        line += if f == is_fill { " oracle agrees" } else { " ORACLE DISAGREES" };
                    }
                    println!("{line}");
                }
            }
        }
    }
    let summary = json!({
        "summary": {
            "structures": fillable + not_fillable,
            "fillable": fillable,
            "not_fillable": not_fillable,
            "cross_checked": c.cross_check,
            "agree": agree,
            "disagree": disagree,
        }
    });
    match c.format {
        Format::Json => println!("{summary}"),
        Format::Text => {
            print!("{} structures: {fillable} fillable, {not_fillable} not fillable", fillable + not_fillable);
            if c.cross_check {
                print!("; oracle agrees on {agree}, disagrees on {disagree}");
            }
            println!();
        }
    }
    if disagree > 0 {
        return Err(Failure::Internal(format!("{disagree} verdicts disagree with the feasibility search")));
    }
    Ok(())
}

#[derive(Deserialize)]
struct VerifyInput {
    presentation: Value,
    twists: Vec<SignedTwist>,
}

fn verify(c: &Common) -> Outcome {
    let input: VerifyInput = parse(c)?;
    let p = Presentation::from_json(&input.presentation.to_string()).map_err(Failure::input)?;
    let book = translate(&p);
    if let Some(h) = input.twists.iter().flat_map(|t| &t.holes).find(|h| !book.universe().contains(h) || **h == book.outer()) {
        return Err(Failure::Input(format!("twist hole {h} is not an inner hole of the book")));
    }
    let ok = verify_certificate(&book, &input.twists)?;
    emit(c, &json!({ "verified": ok }), || format!("verified: {ok}\n"))
}
