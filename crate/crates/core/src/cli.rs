//! Command-line surface: groupoid documents, fibration shorthands and
//! verification reports.

use std::collections::HashMap;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fibred::{analyze_fibration, aut_fibration, cleavage_form, group_map, GroupoidFibration};
use crate::fincat::{FinFunctor, FinGroupoid, GroupTable, GroupoidSpec};
use crate::report::Report;
use crate::suites;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismEntry {
    pub label: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositionEntry {
    pub g: String,
    pub f: String,
    pub gf: String,
}

/// A groupoid as labelled objects, morphisms and composition entries, or a
/// builder shorthand when the tables are empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidDocument {
    pub name: String,
    #[serde(default)]
    pub objects: Vec<String>,
    #[serde(default)]
    pub morphisms: Vec<MorphismEntry>,
    #[serde(default)]
    pub composition: Vec<CompositionEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builder: Option<String>,
}

fn parse_err(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse { location: location.into(), message: message.into() }
}

impl GroupoidDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| parse_err(format!("line {} column {}", e.line(), e.column()), e.to_string()))
    }

    pub fn print(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    /// The full table of `g`, labelling objects `x{i}` and morphisms `m{i}`.
    pub fn from_groupoid(name: &str, g: &FinGroupoid) -> Self {
        let obj = |i: usize| format!("x{i}");
        let mor = |i: usize| format!("m{i}");
        let mut composition = Vec::new();
        for f in 0..g.n_mor() {
            for h in g.out_of(g.tgt(f)) {
                composition.push(CompositionEntry { g: mor(h), f: mor(f), gf: mor(g.compose(h, f)) });
            }
        }
        GroupoidDocument {
            name: name.to_string(),
            objects: (0..g.n_obj()).map(obj).collect(),
            morphisms: (0..g.n_mor())
                .map(|m| MorphismEntry { label: mor(m), src: obj(g.src(m)), tgt: obj(g.tgt(m)) })
                .collect(),
            composition,
            builder: None,
        }
    }

    pub fn to_groupoid(&self) -> Result<FinGroupoid> {
        if self.objects.is_empty() && self.morphisms.is_empty() {
            if let Some(b) = &self.builder {
                return parse_shorthand(b).map_err(|e| match e {
                    Error::Parse { message, .. } => parse_err("builder", message),
                    other => other,
                });
            }
        }
        let objects = index_labels(&self.objects, "objects")?;
        let labels: Vec<String> = self.morphisms.iter().map(|m| m.label.clone()).collect();
        let morphisms = index_labels(&labels, "morphisms")?;
        let lookup = |table: &HashMap<&str, usize>, key: &str, at: String| {
            table.get(key).copied().ok_or_else(|| parse_err(at, format!("unknown label {key:?}")))
        };
        let mut src = Vec::with_capacity(self.morphisms.len());
        let mut tgt = Vec::with_capacity(self.morphisms.len());
        for (i, m) in self.morphisms.iter().enumerate() {
            src.push(lookup(&objects, &m.src, format!("morphisms[{i}].src"))?);
            tgt.push(lookup(&objects, &m.tgt, format!("morphisms[{i}].tgt"))?);
        }
        let comp = self
            .composition
            .iter()
            .enumerate()
            .map(|(i, c)| {
                Ok((
                    lookup(&morphisms, &c.g, format!("composition[{i}].g"))?,
                    lookup(&morphisms, &c.f, format!("composition[{i}].f"))?,
                    lookup(&morphisms, &c.gf, format!("composition[{i}].gf"))?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        GroupoidSpec::Table { n_obj: self.objects.len(), src, tgt, comp }.build()
    }
}

fn index_labels<'a>(labels: &'a [String], field: &str) -> Result<HashMap<&'a str, usize>> {
    let mut out = HashMap::new();
    for (i, l) in labels.iter().enumerate() {
        if out.insert(l.as_str(), i).is_some() {
            return Err(parse_err(format!("{field}[{i}]"), format!("duplicate label {l:?}")));
        }
    }
    Ok(out)
}

/// `cyclic:4`, `symmetric:3`, `dihedral:4`, `klein`, or the compact forms
/// `C4`, `S3`, `D4`, `K`.
pub fn parse_shorthand(s: &str) -> Result<FinGroupoid> {
    group_table(s)?.map_or_else(|| Err(parse_err(s, "unknown groupoid shorthand")), |t| GroupoidSpec::Delooping(t).build())
}

fn group_table(s: &str) -> Result<Option<GroupTable>> {
    let s = s.trim();
    let (kind, n) = match s.split_once(':') {
        Some((k, n)) => (k.to_string(), Some(n)),
        None if s.eq_ignore_ascii_case("klein") || s == "K" => ("klein".to_string(), None),
        None => {
            let split = s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len());
            (s[..split].to_string(), Some(&s[split..]))
        }
    };
    let n = match n {
        Some(n) => Some(n.parse::<usize>().map_err(|_| parse_err(s, format!("bad order {n:?}")))?),
        None => None,
    };
    let t = match (kind.as_str(), n) {
        ("cyclic" | "C", Some(n)) if n >= 1 => GroupTable::cyclic(n),
        ("symmetric" | "S", Some(n)) if (1..=5).contains(&n) => GroupTable::symmetric(n),
        ("dihedral" | "D", Some(n)) if n >= 1 => GroupTable::dihedral(n),
        ("klein", None) => GroupTable::klein(),
        _ => return Ok(None),
    };
    Ok(Some(t))
}

/// `--groupoid` values: a shorthand or a path to a document.
pub fn load_groupoid(arg: &str) -> Result<FinGroupoid> {
    if let Some(t) = group_table(arg).ok().flatten() {
        return GroupoidSpec::Delooping(t).build();
    }
    let text = std::fs::read_to_string(arg).map_err(|e| parse_err(arg, e.to_string()))?;
    GroupoidDocument::parse(&text)
        .map_err(|e| match e {
            Error::Parse { location, message } => parse_err(format!("{arg}: {location}"), message),
            other => other,
        })?
        .to_groupoid()
}

/// Named group maps of a hom-shorthand `TOTAL->BASE:name`.
fn named_map(name: &str, total: &GroupTable, base: &GroupTable, n_total: usize) -> Result<Vec<usize>> {
    let (nt, nb) = (total.order(), base.order());
    match name {
        "mod2" | "mod" => Ok((0..nt).map(|k| k % nb).collect()),
        "sign" => {
            let n = (1..=5).find(|&n| (1..=n).product::<usize>() == n_total).unwrap_or(0);
            Ok(GroupTable::sign_map(n))
        }
        "double" => Ok((0..nt).map(|k| (2 * k) % nb).collect()),
        "trivial" => Ok(vec![0; nt]),
        "identity" if nt == nb => Ok((0..nt).collect()),
        _ => Err(parse_err(name, "unknown group map")),
    }
}

/// `C4->C2:mod2`, `S3->C2:sign`, `C2->C4:double` and similar. A map that is
/// not a fibration is reported by [`analyze_fibration`], not here.
pub fn parse_projection(s: &str) -> Result<FinFunctor> {
    let (groups, name) = s.split_once(':').ok_or_else(|| parse_err(s, "expected TOTAL->BASE:map"))?;
    let (t, b) = groups.split_once("->").ok_or_else(|| parse_err(s, "expected TOTAL->BASE"))?;
    let tt = group_table(t)?.ok_or_else(|| parse_err(t, "unknown group"))?;
    let bt = group_table(b)?.ok_or_else(|| parse_err(b, "unknown group"))?;
    let map = named_map(name, &tt, &bt, tt.order())?;
    let check_hom = (0..tt.order()).all(|x| (0..tt.order()).all(|y| map[tt.mul[x][y]] == bt.mul[map[x]][map[y]]));
    if map.len() != tt.order() || map.iter().any(|&m| m >= bt.order()) || !check_hom {
        return Err(parse_err(s, format!("{name} is not a group homomorphism {t} → {b}")));
    }
    let (tg, bg) = (GroupoidSpec::Delooping(tt).build()?, GroupoidSpec::Delooping(bt).build()?);
    group_map(&tg, &bg, map)
}

/// A functor from `TOTAL BASE MAP`, with `MAP` a comma-separated morphism
/// table for one-object groupoids or a JSON `{obj_map, mor_map}` file.
pub fn parse_explicit(total: &str, base: &str, map: &str) -> Result<FinFunctor> {
    let (t, b) = (load_groupoid(total)?, load_groupoid(base)?);
    let (obj_map, mor_map) = if map.contains(',') || map.parse::<usize>().is_ok() {
        let mors = map
            .split(',')
            .enumerate()
            .map(|(i, x)| x.trim().parse::<usize>().map_err(|_| parse_err(format!("MAP[{i}]"), format!("bad index {x:?}"))))
            .collect::<Result<Vec<_>>>()?;
        (vec![0; t.n_obj()], mors)
    } else {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Tables {
            obj_map: Vec<usize>,
            mor_map: Vec<usize>,
        }
        let text = std::fs::read_to_string(map).map_err(|e| parse_err(map, e.to_string()))?;
        let tables: Tables = serde_json::from_str(&text)
            .map_err(|e| parse_err(format!("{map}: line {} column {}", e.line(), e.column()), e.to_string()))?;
        (tables.obj_map, tables.mor_map)
    };
    FinFunctor::new(t.cat().clone(), b.cat().clone(), obj_map, mor_map)
        .map_err(|e| parse_err(map, e.to_string()))
}

fn projection(args: &[String]) -> Result<FinFunctor> {
    match args {
        [s] => parse_projection(s),
        [t, b, m] => parse_explicit(t, b, m),
        _ => Err(parse_err("--fibration", "expected a shorthand or TOTAL BASE MAP")),
    }
}

/// A named fibration shorthand, analysed.
pub fn parse_fibration(s: &str) -> Result<GroupoidFibration> {
    analyze_fibration(&parse_projection(s)?)
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "gpdcentre", version, about = "Verify centres of finite groupoid fibrations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long = "max-size", global = true, default_value_t = 4)]
    max_size: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structure of the automorphism groupoid.
    Aut {
        #[arg(long)]
        groupoid: String,
    },
    /// Promonoidal, twist and star-autonomy checks on the automorphism groupoid.
    Promonoidal {
        #[arg(long)]
        groupoid: String,
    },
    /// Seeded crossed G-sets through the centre and back.
    CentreRoundtrip {
        #[arg(long)]
        groupoid: String,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// The lifting condition and the cleavage.
    CheckFibration {
        #[arg(long, num_args = 1..=3, required = true)]
        fibration: Vec<String>,
    },
    /// Fibres and the module form of the fibre pseudofunctor.
    Fibre {
        #[arg(long, num_args = 1..=3, required = true)]
        fibration: Vec<String>,
    },
    /// The Grothendieck round trip and form equivalence.
    Grothendieck {
        #[arg(long, num_args = 1..=3, required = true)]
        fibration: Vec<String>,
    },
    /// The induced fibration and its fibre pseudofunctor.
    Haut {
        #[arg(long, num_args = 1..=3, required = true)]
        fibration: Vec<String>,
    },
    /// Both monoidales and their coherence.
    MonoidaleCheck {
        #[arg(long, num_args = 1..=3, required = true)]
        fibration: Vec<String>,
    },
    /// Braiding, twist and hexagons of the convolution on the induced pseudofunctor.
    BraidingCheck {
        #[arg(long, num_args = 1..=3, required = true)]
        fibration: Vec<String>,
    },
    /// Full-centre round trips.
    FullCentre {
        #[arg(long, num_args = 1..=3, required = true)]
        fibration: Vec<String>,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Every suite for the fibration and its groups.
    VerifyAll {
        #[arg(long, num_args = 1..=3, required = true)]
        fibration: Vec<String>,
    },
}

fn fibration_of(args: &[String]) -> Result<std::result::Result<GroupoidFibration, Report>> {
    let proj = projection(args)?;
    let mut r = Report::new("check-fibration");
    r.fact("total.objects", proj.dom.n_obj());
    r.fact("total.morphisms", proj.dom.n_mor());
    r.fact("base.objects", proj.cod.n_obj());
    r.fact("base.morphisms", proj.cod.n_mor());
    match analyze_fibration(&proj) {
        Ok(f) => Ok(Ok(f)),
        Err(Error::NotFibration { morphism, target }) => {
            r.fail("lifting", format!("unliftable: base morphism {morphism} has no lift with target {target}"));
            Ok(Err(r))
        }
        Err(e) => Err(e),
    }
}

fn run(cli: &Cli) -> Result<Report> {
    let (seed, max) = (cli.seed, cli.max_size);
    let with_fibration = |args: &[String], name: &str, body: &dyn Fn(&GroupoidFibration) -> Result<Report>| {
        Ok(match fibration_of(args)? {
            Ok(f) => {
                let mut r = Report::new(name);
                r.pass("lifting");
                r.absorb(name, body(&f)?);
                r
            }
            Err(mut r) => {
                r.command = name.to_string();
                r
            }
        })
    };
    match &cli.command {
        Command::Aut { groupoid } => suites::aut_structure(&load_groupoid(groupoid)?),
        Command::Promonoidal { groupoid } => suites::balanced_autonomy(&load_groupoid(groupoid)?),
        Command::CentreRoundtrip { groupoid, count } => {
            suites::crossed_roundtrip(&load_groupoid(groupoid)?, seed, *count, max)
        }
        Command::CheckFibration { fibration } => with_fibration(fibration, "check-fibration", &|f| {
            let mut r = Report::new("cleavage");
            for p in 0..f.base.n_obj() {
                r.fact(format!("fibre{p}.objects"), f.fibre(p).objects.len());
                r.fact(format!("fibre{p}.morphisms"), f.fibre(p).incl.len());
            }
            r.check("valid", cleavage_form(f).and_then(|cf| cf.verify()).map_err(|e| e.to_string()));
            Ok(r)
        }),
        Command::Fibre { fibration } | Command::Grothendieck { fibration } => {
            let name = if matches!(cli.command, Command::Fibre { .. }) { "fibre" } else { "grothendieck" };
            with_fibration(fibration, name, &suites::fibration_pipeline)
        }
        Command::Haut { fibration } => with_fibration(fibration, "haut", &|f| {
            let af = aut_fibration(f)?;
            let mut r = Report::new("haut");
            r.fact("total_aut.objects", af.total_aut.aut().n_obj());
            r.fact("base_aut.objects", af.base_aut.aut().n_obj());
            for (j, fb) in af.fibration.fibres().iter().enumerate() {
                r.fact(format!("fibre{j}.objects"), fb.objects.len());
            }
            r.check("coherent", af.haut.check_coherence().map_err(|e| e.to_string()));
            r.absorb("roundtrip", crate::centre::aut_roundtrip(&crate::centre::CatPs::haut(&af)?, &af.base_aut)?);
            Ok(r)
        }),
        Command::MonoidaleCheck { fibration } => with_fibration(fibration, "monoidale-check", &|f| {
            let af = aut_fibration(f)?;
            let mut r = Report::new("monoidale");
            r.absorb("h", crate::fibred::h_monoidale(f)?.report);
            r.absorb("haut", crate::fibred::haut_monoidale(f, &af)?.report);
            Ok(r)
        }),
        Command::BraidingCheck { fibration } => with_fibration(fibration, "braiding-check", &suites::braiding),
        Command::FullCentre { fibration, count } => {
            with_fibration(fibration, "full-centre", &|f| suites::full_centre(f, seed, *count))
        }
        Command::VerifyAll { fibration } => with_fibration(fibration, "verify-all", &|f| {
            let mut r = Report::new("verify-all");
            for (name, g) in [("base", &f.base), ("total", &f.total)] {
                r.absorb(&format!("{name}.aut"), suites::aut_structure(g)?);
                r.absorb(&format!("{name}.promonoidal"), suites::balanced_autonomy(g)?);
                r.absorb(&format!("{name}.crossed"), suites::crossed_roundtrip(g, seed, 20, max.min(5))?);
                r.absorb(&format!("{name}.day"), suites::day_pointwise(g, seed, 20, max)?);
            }
            r.absorb("coend", suites::coend_engine(seed, 10, 3)?);
            r.absorb("fibration", suites::fibration_pipeline(f)?);
            r.absorb("biequivalence", suites::biequivalence(f, seed, 10, max)?);
            r.absorb("biduals", suites::biduals(f)?);
            r.absorb("braiding", suites::braiding(f)?);
            r.absorb("full_centre", suites::full_centre(f, seed, 10)?);
            r.absorb("cp_modcat", suites::cp_modcat(seed, 5)?);
            Ok(r)
        }),
    }
}

/// Runs the command line in `args` and returns the exit status with the
/// text written to standard output.
pub fn run_args<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    match run(&cli) {
        Ok(r) => {
            let out = match cli.format {
                Format::Json => r.to_json() + "\n",
                Format::Text => r.to_text(),
            };
            (if r.all_pass() { 0 } else { 1 }, out)
        }
        Err(e @ Error::Parse { .. }) => (2, format!("error: {e}\n")),
        Err(e) => {
            let mut r = Report::new("error");
            r.fail("run", e.to_string());
            let out = match cli.format {
                Format::Json => r.to_json() + "\n",
                Format::Text => r.to_text(),
            };
            (1, out)
        }
    }
}

pub fn main_entry() -> i32 {
    let (code, out) = run_args(std::env::args_os());
    if code == 2 {
        eprint!("{out}");
    } else {
        print!("{out}");
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn document_round_trip() {
        let g = parse_shorthand("dihedral:4").unwrap();
        let doc = GroupoidDocument::from_groupoid("D4", &g);
        let text = doc.print();
        assert_eq!(GroupoidDocument::parse(&text).unwrap(), doc);
        assert_eq!(doc.to_groupoid().unwrap(), g);
        let b = GroupoidDocument {
            name: "S3".into(),
            objects: vec![],
            morphisms: vec![],
            composition: vec![],
            builder: Some("symmetric:3".into()),
        };
        assert_eq!(GroupoidDocument::parse(&b.print()).unwrap(), b);
        assert_eq!(b.to_groupoid().unwrap().n_mor(), 6);
    }

    #[test]
    fn parse_errors_carry_locations() {
        let err = GroupoidDocument::parse("{\"name\": \"x\", \"objects\": [1]}").unwrap_err();
        assert!(matches!(err, Error::Parse { ref location, .. } if location.starts_with("line 1")), "{err}");
        let mut doc = GroupoidDocument::from_groupoid("C2", &parse_shorthand("C2").unwrap());
        doc.morphisms[1].tgt = "nowhere".into();
        let err = doc.to_groupoid().unwrap_err();
        assert!(matches!(err, Error::Parse { ref location, .. } if location == "morphisms[1].tgt"), "{err}");
        assert!(matches!(parse_projection("C4->C2:bogus"), Err(Error::Parse { .. })));
        assert_eq!(run_args(["gpdcentre", "aut", "--groupoid", "/no/such/file"]).0, 2);
    }

    #[test]
    fn aut_of_s3() {
        let (code, out) = run_args(["gpdcentre", "aut", "--groupoid", "symmetric:3"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("objects = 6") && out.contains("morphisms = 36") && out.contains("components = 3"));
    }

    #[test]
    fn doubling_is_not_a_fibration() {
        let (code, out) = run_args(["gpdcentre", "check-fibration", "--fibration", "C2->C4:double"]);
        assert_eq!(code, 1);
        assert!(out.contains("unliftable"), "{out}");
    }

    #[test]
    fn reports_are_deterministic_json() {
        let args = ["gpdcentre", "full-centre", "--fibration", "S3->C2:sign", "--format", "json", "--seed", "3"];
        let (c1, o1) = run_args(args);
        let (c2, o2) = run_args(args);
        assert_eq!((c1, &o1), (c2, &o2));
        assert_eq!(c1, 0, "{o1}");
        assert!(o1.contains("\"schema\": \"gpdcentre/1\""));
    }

    #[test]
    fn explicit_tables_match_shorthand() {
        let a = parse_projection("C4->C2:mod2").unwrap();
        let b = parse_explicit("cyclic:4", "cyclic:2", "0,1,0,1").unwrap();
        assert_eq!(a, b);
    }
}
