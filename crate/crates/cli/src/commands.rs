use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use divlab_core::bounds::{steiner_diversity_with, steiner_tree, SteinerConfig, SteinerMethod};
use divlab_core::extension::{amalgamated_table, is_admissible, Amalgamation};
use divlab_core::io::{self, pretty};
use divlab_core::subset::all_subsets;
use divlab_core::tower::{grow, recorded_deficits, BatteryKind, BatterySpec};
use divlab_core::{
    amalgamate, diameter_diversity, extend_from_support, find_embedding, find_isomorphism, has_support, hat_delta,
    oracle, perturb_to_admissible, realize, sandwich_check, validate, AdmissibleFunction, ExtensionFamily,
    FiniteDiversity, GrowthPolicy, PointId, Rat, RealizationQuery, SubsetKey, TowerState,
};
use serde_json::{json, Value};

use crate::report::{subset_name, value_json, Output, Verdict};
use crate::{Battery, Cli, Command, Which};

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_diversity(path: &Path) -> Result<FiniteDiversity> {
    io::parse_diversity(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_admissible(path: &Path) -> Result<AdmissibleFunction> {
    io::parse_admissible(&read(path)?, path.parent()).with_context(|| format!("in {}", path.display()))
}

fn pairs_json(pairs: &[(PointId, PointId)], src: &FiniteDiversity, dst: &FiniteDiversity) -> Value {
    Value::Array(pairs.iter().map(|&(x, y)| json!([src.label(x), dst.label(y)])).collect())
}

pub fn run(cli: &Cli) -> Result<Output> {
    let oracle = cli.oracle;
    match &cli.command {
        Command::Validate { input } => {
            let d = load_diversity(input)?;
            if oracle {
                let ok = oracle::naive_validate(d.len(), d.table());
                let verdict = if ok { Verdict::Ok } else { Verdict::Fail };
                return Ok(Output::report(verdict, format!("validate (reference check): {}", verdict.as_str())));
            }
            Ok(Output::from_validation(&validate(&d), d.labels(), "validate"))
        }
        Command::Metric { input } => {
            let d = load_diversity(input)?;
            let m = d.induced_metric();
            let rows: Vec<Vec<String>> = m.rows().iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect();
            Ok(Output::report(Verdict::Ok, format!("metric on {} points", d.len()))
                .with_witness(json!({ "points": d.labels(), "distances": rows })))
        }
        Command::Bounds { input, which, terminals } => bounds(&load_diversity(input)?, *which, terminals.as_deref(), oracle),
        Command::AdmissibleCheck { input } => {
            let (base, table) =
                io::parse_admissible_table(&read(input)?, input.parent()).with_context(|| format!("in {}", input.display()))?;
            if oracle {
                let ok = oracle::naive_admissible(&base, &table);
                let verdict = if ok { Verdict::Ok } else { Verdict::Fail };
                return Ok(Output::report(verdict, format!("admissible (reference check): {}", verdict.as_str())));
            }
            Ok(Output::from_validation(&is_admissible(&base, &table)?, base.labels(), "admissible"))
        }
        Command::Hatdelta { inputs } => {
            let members = inputs.iter().map(|p| load_admissible(p)).collect::<Result<Vec<_>>>()?;
            let family = ExtensionFamily::from_members(members)?;
            let value = if oracle {
                let tables: Vec<&[Rat]> = family.members().iter().map(|f| f.table()).collect();
                oracle::naive_hat_delta(family.base().len(), &tables)
            } else {
                hat_delta(&family)
            };
            Ok(Output::report(Verdict::Ok, format!("extension diversity of {} functions: {value}", family.len()))
                .with_witness(value_json(value)))
        }
        Command::Extend { input, support } => {
            let f = load_admissible(input)?;
            let d = f.base_arc().clone();
            let s = d.parse_subset(support)?;
            let local = f.restrict(s)?;
            let ext = if oracle {
                let table = oracle::all_covers_extension(&d, s, local.table());
                AdmissibleFunction::with_support(d.clone(), table, s)?
            } else {
                extend_from_support(&d, s, &local)?
            };
            Ok(Output::Document {
                body: io::admissible_to_string(&ext),
                summary: format!("extended from {{{}}}", d.format_subset(s)),
            })
        }
        Command::SupportCheck { input, support } => {
            let f = load_admissible(input)?;
            let s = f.base().parse_subset(support)?;
            let ok = if oracle {
                oracle::all_covers_extension(f.base(), s, f.restrict(s)?.table()) == f.table()
            } else {
                has_support(&f, s)?
            };
            let verdict = if ok { Verdict::Ok } else { Verdict::Fail };
            Ok(Output::report(verdict, format!("{{{}}} is {}a support", f.base().format_subset(s), if ok { "" } else { "not " })))
        }
        Command::Amalgamate { input, label } => {
            let f = load_admissible(input)?;
            let d = f.base_arc().clone();
            match amalgamate(&d, &f, label)? {
                Amalgamation::Extended(e) => {
                    if oracle && !oracle::naive_validate(e.len(), &amalgamated_table(&d, f.table())) {
                        bail!("reference check rejects the amalgamated table");
                    }
                    Ok(Output::Document {
                        body: io::diversity_to_string(&e),
                        summary: format!("adjoined {label} ({} points)", e.len()),
                    })
                }
                Amalgamation::Identified(x) => Ok(Output::report(
                    Verdict::Ok,
                    format!("function vanishes on {{{}}}: the new point is {}", d.label(x), d.label(x)),
                )
                .with_witness(json!({ "identified_with": d.label(x) }))),
            }
        }
        Command::Realize { host, query } => {
            let host = Arc::new(load_diversity(host)?);
            let q = io::parse_query(&read(query)?, &host).with_context(|| format!("in {}", query.display()))?;
            let found = if oracle { reference_realize(&q) } else { realize(&q) };
            Ok(match found {
                Some(x) => Output::report(Verdict::Found, format!("realized by {}", host.label(x)))
                    .with_witness(json!({ "point": host.label(x), "error": worst_error(&q, x).to_string() })),
                None => Output::report(Verdict::NoneFound, format!("no point within {}", q.epsilon)),
            })
        }
        Command::Iso { first, second } => {
            let a = Arc::new(load_diversity(first)?);
            let b = Arc::new(load_diversity(second)?);
            if oracle {
                return Ok(match oracle::brute_force_isomorphism(&a, &b) {
                    Some(map) => {
                        let pairs: Vec<(PointId, PointId)> = map.iter().enumerate().map(|(i, &j)| (PointId(i), PointId(j))).collect();
                        Output::report(Verdict::Found, "isomorphic").with_witness(json!({ "pairs": pairs_json(&pairs, &a, &b) }))
                    }
                    None => Output::report(Verdict::NoneFound, "not isomorphic"),
                });
            }
            Ok(match find_isomorphism(&a, &b) {
                Some(phi) => Output::report(Verdict::Found, "isomorphic")
                    .with_witness(json!({ "pairs": pairs_json(phi.pairs(), &a, &b) })),
                None => Output::report(Verdict::NoneFound, "not isomorphic"),
            })
        }
        Command::Embed { small, big } => {
            let a = Arc::new(load_diversity(small)?);
            let b = Arc::new(load_diversity(big)?);
            let pairs = if oracle {
                reference_embedding(&a, &b)
            } else {
                find_embedding(&a, &b).map(|phi| phi.pairs().to_vec())
            };
            Ok(match pairs {
                Some(p) => Output::report(Verdict::Found, "embedding found").with_witness(json!({ "pairs": pairs_json(&p, &a, &b) })),
                None => Output::report(Verdict::NoneFound, "no embedding"),
            })
        }
        Command::Perturb { host, query, map, eps0 } => {
            let host = Arc::new(load_diversity(host)?);
            let q = io::parse_query(&read(query)?, &host).with_context(|| format!("in {}", query.display()))?;
            let eps0: Rat = eps0.parse().map_err(|e| anyhow::anyhow!("--eps0: {e}"))?;
            let gamma = parse_map(&host, q.subset, map)?;
            let g = perturb_to_admissible(&host, q.subset, &q.f, &gamma, eps0)?;
            if oracle && !oracle::naive_admissible(g.base(), g.table()) {
                bail!("reference check rejects the perturbed function");
            }
            Ok(Output::Document { body: io::admissible_to_string(&g), summary: "perturbed function is admissible".into() })
        }
        Command::Grow { rounds, seed, policy, from, out } => {
            let mut p = match policy {
                Some(path) => io::parse_policy(&read(path)?).with_context(|| format!("in {}", path.display()))?,
                None => GrowthPolicy::default(),
            };
            p.rounds = *rounds;
            let start = match from {
                Some(path) => io::parse_tower(&read(path)?).with_context(|| format!("in {}", path.display()))?.0,
                None => TowerState::single_point(*seed),
            };
            let grown = grow(&start, &p)?;
            let text = pretty(&io::tower_to_value(&grown, Some(&p)));
            let summary = format!("grew {} round(s) to {} points", rounds, grown.current.len());
            match out {
                Some(path) => {
                    std::fs::write(path, &text).with_context(|| format!("cannot write {}", path.display()))?;
                    Ok(Output::report(Verdict::Ok, summary)
                        .with_witness(json!({ "points": grown.current.len(), "rounds": grown.rounds() })))
                }
                None => Ok(Output::Document { body: text, summary }),
            }
        }
        Command::Deficit { tower, battery, kind, seed, policy, csv } => {
            let (state, stored) = io::parse_tower(&read(tower)?).with_context(|| format!("in {}", tower.display()))?;
            let p = match policy {
                Some(path) => io::parse_policy(&read(path)?).with_context(|| format!("in {}", path.display()))?,
                None => stored.unwrap_or_default(),
            };
            let kind = match kind {
                Battery::Random => BatteryKind::Random,
                Battery::Kappa => BatteryKind::Kappa,
            };
            let rows = recorded_deficits(&state, &p, &BatterySpec { size: *battery, kind }, *seed)?;
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["round", "deficit", "decimal"])?;
            for (round, d) in &rows {
                w.write_record([round.to_string(), d.to_string(), d.to_decimal_string(6)])?;
            }
            let bytes = w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?;
            let last = rows.last().map(|r| r.1).unwrap_or(Rat::ZERO);
            let summary = format!("{} rounds, final deficit {last}", rows.len());
            match csv {
                Some(path) => {
                    std::fs::write(path, &bytes).with_context(|| format!("cannot write {}", path.display()))?;
                    let rows: Vec<Value> =
                        rows.iter().map(|(r, d)| json!({ "round": r, "deficit": d.to_string() })).collect();
                    Ok(Output::report(Verdict::Ok, summary).with_witness(json!({ "rows": rows })))
                }
                None => Ok(Output::Document { body: String::from_utf8(bytes)?, summary }),
            }
        }
    }
}

fn bounds(d: &FiniteDiversity, which: Which, terminals: Option<&str>, oracle: bool) -> Result<Output> {
    let m = d.induced_metric();
    let config = SteinerConfig {
        method: if oracle { SteinerMethod::Exhaustive } else { SteinerMethod::DreyfusWagner },
        ..SteinerConfig::default()
    };
    match which {
        Which::Diam => Ok(Output::Document {
            body: io::diversity_to_string(&diameter_diversity(&m)),
            summary: "diameter diversity of the induced metric".into(),
        }),
        Which::Steiner => match terminals {
            Some(t) => {
                let s = d.parse_subset(t)?;
                let tree = steiner_tree(&m, s, &config)?;
                let edges: Vec<Value> = tree.edges.iter().map(|&(u, v)| json!([d.label(u), d.label(v)])).collect();
                Ok(Output::report(Verdict::Ok, format!("lightest tree on {{{t}}}: {}", tree.weight))
                    .with_witness(json!({ "weight": tree.weight.to_string(), "edges": edges })))
            }
            None => Ok(Output::Document {
                body: io::diversity_to_string(&steiner_diversity_with(&m, &config)?),
                summary: "Steiner diversity of the induced metric".into(),
            }),
        },
        Which::Sandwich => {
            if oracle {
                let upper = oracle::exhaustive_steiner_table(&m);
                let lower = diameter_diversity(&m);
                let bad: Vec<String> = all_subsets(d.len())
                    .filter(|&a| lower.value(a) > d.value(a) || d.value(a) > upper[a.index()])
                    .map(|a| subset_name(a, d.labels()))
                    .collect();
                let verdict = if bad.is_empty() { Verdict::Ok } else { Verdict::Fail };
                let out = Output::report(verdict, format!("sandwich (reference check): {}", verdict.as_str()));
                return Ok(if bad.is_empty() { out } else { out.with_witness(json!({ "subsets": bad })) });
            }
            Ok(Output::from_validation(&sandwich_check(d), d.labels(), "sandwich"))
        }
    }
}

fn worst_error(q: &RealizationQuery, x: PointId) -> Rat {
    all_subsets(q.subset.len())
        .map(|a| (q.host.value(a.expand(q.subset).with(x)) - q.f.value(a)).abs())
        .max()
        .unwrap_or(Rat::ZERO)
}

/// First host point, in index order, whose error is within epsilon and minimal.
fn reference_realize(q: &RealizationQuery) -> Option<PointId> {
    let mut best: Option<(Rat, PointId)> = None;
    for x in q.host.points() {
        let e = worst_error(q, x);
        if e <= q.epsilon && best.map_or(true, |(b, _)| e < b) {
            best = Some((e, x));
        }
    }
    best.map(|(_, x)| x)
}

/// Depth-first search over all injections, checking every subset at the end.
fn reference_embedding(a: &FiniteDiversity, b: &FiniteDiversity) -> Option<Vec<(PointId, PointId)>> {
    fn go(a: &FiniteDiversity, b: &FiniteDiversity, map: &mut Vec<usize>) -> bool {
        if map.len() == a.len() {
            return all_subsets(a.len()).all(|s| b.value(SubsetKey::from_indices(&s.iter().map(|p| map[p.0]).collect::<Vec<_>>())) == a.value(s));
        }
        for y in 0..b.len() {
            if !map.contains(&y) {
                map.push(y);
                if go(a, b, map) {
                    return true;
                }
                map.pop();
            }
        }
        false
    }
    let mut map = Vec::new();
    go(a, b, &mut map).then(|| map.iter().enumerate().map(|(i, &j)| (PointId(i), PointId(j))).collect())
}

/// Parses `a:a2 b:b2` into images listed in the subset's ascending order.
fn parse_map(host: &FiniteDiversity, subset: SubsetKey, text: &str) -> Result<Vec<PointId>> {
    let mut images = vec![None; host.len()];
    for pair in text.split_whitespace() {
        let (from, to) = pair.split_once(':').with_context(|| format!("map entry {pair:?} is not of the form a:b"))?;
        let x = host.point(from).with_context(|| format!("unknown label {from:?}"))?;
        let y = host.point(to).with_context(|| format!("unknown label {to:?}"))?;
        if !subset.contains(x) {
            bail!("{from} is not in the query subset");
        }
        if images[x.0].replace(y).is_some() {
            bail!("{from} is mapped twice");
        }
    }
    subset
        .iter()
        .map(|x| images[x.0].with_context(|| format!("no image given for {}", host.label(x))))
        .collect()
}
