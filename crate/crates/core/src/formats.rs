//! Line-oriented text formats. Each line is a keyword followed by
//! whitespace-separated fields; blank lines and lines starting with `# `
//! are skipped.

use std::str::FromStr;

use crate::dfa::Dfa;
use crate::digraph::{ColoredDigraph, WeightedDigraph};
use crate::error::{Error, Result};
use crate::fwd::{ChpInstance as ConstraintInstance, Constraint, Relation};
use crate::hitting::{Chamber, ChpInstance, OdpInstance, PlpInstance, ShpInstance};
use crate::lattice::{join, IhpInstance, ProgressionSet, SemilinearSet, TranslatedCone};
use crate::linalg::{Int, Matrix, QMatrix, Rational, ZMatrix};
use crate::lrs::{AffineFunction, Lrs};
use crate::monoid::{HitRelation, MonoidPresentation, StateMap, WwhpInstance};

struct Line {
    no: usize,
    key: String,
    args: Vec<String>,
}

/// Cursor over the meaningful lines of a text.
struct Reader {
    lines: Vec<Line>,
    pos: usize,
    last: usize,
}

fn perr(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

impl Reader {
    fn new(text: &str) -> Reader {
        let lines: Vec<Line> = text
            .lines()
            .enumerate()
            .filter_map(|(i, l)| {
                let t = l.trim();
                if t.is_empty() || t == "#" || t.starts_with("# ") {
                    return None;
                }
                let mut it = t.split_whitespace().map(str::to_string);
                let key = it.next()?;
                Some(Line {
                    no: i + 1,
                    key,
                    args: it.collect(),
                })
            })
            .collect();
        let last = lines.last().map_or(1, |l| l.no);
        Reader {
            lines,
            pos: 0,
            last,
        }
    }

    fn peek(&self) -> Option<&str> {
        self.lines.get(self.pos).map(|l| l.key.as_str())
    }

    fn next(&mut self) -> Option<&Line> {
        let l = self.lines.get(self.pos);
        self.pos += 1;
        l
    }

    fn line_no(&self) -> usize {
        self.lines.get(self.pos).map_or(self.last, |l| l.no)
    }

    fn expect(&mut self, key: &str) -> Result<(usize, Vec<String>)> {
        let no = self.line_no();
        match self.next() {
            Some(l) if l.key == key => Ok((l.no, l.args.clone())),
            Some(l) => Err(perr(l.no, format!("expected `{key}`, found `{}`", l.key))),
            None => Err(perr(no, format!("expected `{key}`, found end of input"))),
        }
    }

    fn take_if(&mut self, key: &str) -> Option<(usize, Vec<String>)> {
        if self.peek() == Some(key) {
            let l = self.next().unwrap();
            Some((l.no, l.args.clone()))
        } else {
            None
        }
    }

    fn finish(&self) -> Result<()> {
        match self.lines.get(self.pos) {
            Some(l) => Err(perr(l.no, format!("unexpected `{}`", l.key))),
            None => Ok(()),
        }
    }
}

fn num<T: FromStr>(line: usize, s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| perr(line, format!("bad number {s:?}")))
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (Int::from_str(p).ok()?, Int::from_str(q).ok()?),
        None => (Int::from_str(s).ok()?, Int::from(1)),
    };
    if q == Int::from(0) {
        return None;
    }
    Some(Rational::new(p, q))
}

fn rationals(line: usize, args: &[String]) -> Result<Vec<Rational>> {
    args.iter()
        .map(|s| parse_rational(s).ok_or_else(|| perr(line, format!("bad rational {s:?}"))))
        .collect()
}

fn integers(line: usize, args: &[String]) -> Result<Vec<Int>> {
    args.iter().map(|s| num(line, s)).collect()
}

fn count(line: usize, args: &[String], n: usize) -> Result<()> {
    if args.len() != n {
        return Err(perr(
            line,
            format!("expected {n} fields, found {}", args.len()),
        ));
    }
    Ok(())
}

fn qjoin(v: &[Rational]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

// ---------------------------------------------------------------- lrs

fn read_lrs(r: &mut Reader) -> Result<Lrs> {
    let (no, args) = r.expect("lrs")?;
    count(no, &args, 1)?;
    let d: usize = num(no, &args[0])?;
    let (na, a) = r.expect("a")?;
    count(na, &a, d)?;
    let (nb, b) = r.expect("b")?;
    count(nb, &b, d)?;
    Lrs::new(rationals(na, &a)?, rationals(nb, &b)?).map_err(|e| perr(no, e.to_string()))
}

pub fn parse_lrs(text: &str) -> Result<Lrs> {
    let mut r = Reader::new(text);
    let s = read_lrs(&mut r)?;
    r.finish()?;
    Ok(s)
}

// ---------------------------------------------------------------- matrices

fn read_matrix<T>(
    r: &mut Reader,
    cell: impl Fn(usize, &[String]) -> Result<Vec<T>>,
) -> Result<Matrix<T>>
where
    T: Clone + num_traits::Zero + num_traits::One,
{
    let (no, args) = r.expect("mat")?;
    count(no, &args, 2)?;
    let rows: usize = num(no, &args[0])?;
    let cols: usize = num(no, &args[1])?;
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows {
        let no = r.line_no();
        let l = r.next().ok_or_else(|| perr(no, "matrix row missing"))?;
        let mut fields = vec![l.key.clone()];
        fields.extend(l.args.iter().cloned());
        let no = l.no;
        count(no, &fields, cols)?;
        data.extend(cell(no, &fields)?);
    }
    Ok(Matrix::new(rows, cols, data))
}

pub fn write_qmatrix(m: &QMatrix) -> String {
    let mut s = format!("mat {} {}\n", m.rows(), m.cols());
    for row in m.to_rows() {
        s += &qjoin(&row);
        s.push('\n');
    }
    s
}

pub fn write_zmatrix(m: &ZMatrix) -> String {
    let mut s = format!("mat {} {}\n", m.rows(), m.cols());
    for row in m.to_rows() {
        s += &join(&row);
        s.push('\n');
    }
    s
}

pub fn parse_qmatrix(text: &str) -> Result<QMatrix> {
    let mut r = Reader::new(text);
    let m = read_matrix(&mut r, rationals)?;
    r.finish()?;
    Ok(m)
}

pub fn parse_zmatrix(text: &str) -> Result<ZMatrix> {
    let mut r = Reader::new(text);
    let m = read_matrix(&mut r, integers)?;
    r.finish()?;
    Ok(m)
}

/// Consecutive `mat` records, as for a matrix semigroup.
pub fn parse_zmatrices(text: &str) -> Result<Vec<ZMatrix>> {
    let mut r = Reader::new(text);
    let mut out = Vec::new();
    while r.peek().is_some() {
        out.push(read_matrix(&mut r, integers)?);
    }
    if out.is_empty() {
        return Err(perr(1, "no matrices"));
    }
    Ok(out)
}

// ---------------------------------------------------------------- automata

pub fn write_dfa(a: &Dfa) -> String {
    let mut s = String::from("dfa\n");
    s += &format!("alphabet {}\n", a.alphabet().join(" "));
    s += &format!("states {}\n", a.states());
    s += &format!("initial {}\n", a.initial());
    let acc: Vec<String> = a.accepting_states().iter().map(|q| q.to_string()).collect();
    s += &format!("accepting {}\n", acc.join(" "));
    for q in 0..a.states() {
        for (i, sym) in a.alphabet().iter().enumerate() {
            s += &format!("trans {q} {sym} {}\n", a.step(q, i));
        }
    }
    s
}

pub fn parse_dfa(text: &str) -> Result<Dfa> {
    let mut r = Reader::new(text);
    let (no, args) = r.expect("dfa")?;
    count(no, &args, 0)?;
    let (_, alphabet) = r.expect("alphabet")?;
    let (ns, st) = r.expect("states")?;
    count(ns, &st, 1)?;
    let states: usize = num(ns, &st[0])?;
    let (ni, init) = r.expect("initial")?;
    count(ni, &init, 1)?;
    let initial: usize = num(ni, &init[0])?;
    let (na, acc) = r.expect("accepting")?;
    let mut accepting = vec![false; states];
    for q in &acc {
        let q: usize = num(na, q)?;
        *accepting
            .get_mut(q)
            .ok_or_else(|| perr(na, "accepting state out of range"))? = true;
    }
    let k = alphabet.len();
    let mut trans = vec![usize::MAX; states * k];
    while let Some((nt, t)) = r.take_if("trans") {
        count(nt, &t, 3)?;
        let q: usize = num(nt, &t[0])?;
        let a = alphabet
            .iter()
            .position(|s| *s == t[1])
            .ok_or_else(|| perr(nt, format!("unknown symbol {:?}", t[1])))?;
        let p: usize = num(nt, &t[2])?;
        if q >= states {
            return Err(perr(nt, "state out of range"));
        }
        if trans[q * k + a] != usize::MAX {
            return Err(perr(nt, "duplicate transition"));
        }
        trans[q * k + a] = p;
    }
    r.finish()?;
    if trans.contains(&usize::MAX) {
        return Err(perr(no, "transition table is not total"));
    }
    Dfa::new(alphabet, states, trans, initial, accepting).map_err(|e| perr(no, e.to_string()))
}

// ---------------------------------------------------------------- digraphs

pub fn write_weighted_digraph(g: &WeightedDigraph) -> String {
    let mut s = format!(
        "digraph {}\nmark s {}\nmark f {}\n",
        g.vertices, g.start, g.finish
    );
    for e in &g.edges {
        s += &format!("edge {} {} {}\n", e.src, e.dst, e.weight);
    }
    s
}

fn read_marks(r: &mut Reader, vertices: usize) -> Result<(usize, usize)> {
    let mut s = None;
    let mut f = None;
    while let Some((no, args)) = r.take_if("mark") {
        count(no, &args, 2)?;
        let v: usize = num(no, &args[1])?;
        if v >= vertices {
            return Err(perr(no, "marked vertex out of range"));
        }
        match args[0].as_str() {
            "s" => s = Some(v),
            "f" => f = Some(v),
            other => return Err(perr(no, format!("unknown mark {other:?}"))),
        }
    }
    let no = r.line_no();
    Ok((
        s.ok_or_else(|| perr(no, "missing `mark s`"))?,
        f.ok_or_else(|| perr(no, "missing `mark f`"))?,
    ))
}

pub fn parse_weighted_digraph(text: &str) -> Result<WeightedDigraph> {
    let mut r = Reader::new(text);
    let g = read_weighted(&mut r)?;
    r.finish()?;
    Ok(g)
}

fn read_weighted(r: &mut Reader) -> Result<WeightedDigraph> {
    let (no, args) = r.expect("digraph")?;
    count(no, &args, 1)?;
    let v: usize = num(no, &args[0])?;
    let (s, f) = read_marks(r, v)?;
    let mut g = WeightedDigraph::new(v, s, f);
    while let Some((ne, e)) = r.take_if("edge") {
        count(ne, &e, 3)?;
        let (a, b): (usize, usize) = (num(ne, &e[0])?, num(ne, &e[1])?);
        if a >= v || b >= v {
            return Err(perr(ne, "edge endpoint out of range"));
        }
        g.add_edge(a, b, num(ne, &e[2])?);
    }
    Ok(g)
}

/// Colored digraphs carry a `colors <s>` line; colors are written 1-based.
pub fn write_colored_digraph(g: &ColoredDigraph) -> String {
    let mut s = format!(
        "digraph {}\ncolors {}\nmark s {}\nmark f {}\n",
        g.vertices, g.colors, g.a, g.b
    );
    for e in &g.edges {
        s += &format!("edge {} {} {}\n", e.src, e.dst, e.color + 1);
    }
    s
}

fn read_colored(r: &mut Reader) -> Result<ColoredDigraph> {
    let (no, args) = r.expect("digraph")?;
    count(no, &args, 1)?;
    let v: usize = num(no, &args[0])?;
    let (nc, c) = r.expect("colors")?;
    count(nc, &c, 1)?;
    let colors: usize = num(nc, &c[0])?;
    let (a, b) = read_marks(r, v)?;
    let mut g = ColoredDigraph::new(v, colors, a, b);
    while let Some((ne, e)) = r.take_if("edge") {
        count(ne, &e, 3)?;
        let (x, y, col): (usize, usize, usize) =
            (num(ne, &e[0])?, num(ne, &e[1])?, num(ne, &e[2])?);
        if x >= v || y >= v || col == 0 || col > colors {
            return Err(perr(ne, "edge endpoint or color out of range"));
        }
        g.add_edge(x, y, col - 1);
    }
    Ok(g)
}

pub fn parse_colored_digraph(text: &str) -> Result<ColoredDigraph> {
    let mut r = Reader::new(text);
    let g = read_colored(&mut r)?;
    r.finish()?;
    Ok(g)
}

// ---------------------------------------------------------------- monoids

pub fn parse_monoid(text: &str) -> Result<MonoidPresentation> {
    let mut r = Reader::new(text);
    let (no, args) = r.expect("monoid")?;
    count(no, &args, 1)?;
    let size: usize = num(no, &args[0])?;
    let mut elements = Vec::with_capacity(size);
    for _ in 0..size {
        let (nm, m) = r.expect("map")?;
        let img: Vec<usize> = m.iter().map(|x| num(nm, x)).collect::<Result<_>>()?;
        if img.iter().any(|&q| q >= img.len()) {
            return Err(perr(nm, "map image out of range"));
        }
        elements.push(StateMap(img));
    }
    let mut generators = Vec::new();
    while let Some((ng, g)) = r.take_if("gen") {
        count(ng, &g, 2)?;
        let i: usize = num(ng, &g[1])?;
        if i >= size {
            return Err(perr(ng, "generator index out of range"));
        }
        generators.push((g[0].clone(), i));
    }
    let identity = match r.take_if("identity") {
        Some((ni, a)) => {
            count(ni, &a, 1)?;
            Some(num(ni, &a[0])?)
        }
        None => None,
    };
    r.finish()?;
    Ok(MonoidPresentation {
        elements,
        generators,
        identity,
    })
}

// ---------------------------------------------------------------- cones and sets

fn read_cone(r: &mut Reader) -> Result<TranslatedCone> {
    let (no, args) = r.expect("cone")?;
    count(no, &args, 1)?;
    let dim: usize = num(no, &args[0])?;
    let (na, apex) = r.expect("apex")?;
    count(na, &apex, dim)?;
    let apex = integers(na, &apex)?;
    let mut gens = Vec::new();
    while let Some((ng, g)) = r.take_if("gen") {
        count(ng, &g, dim)?;
        gens.push(integers(ng, &g)?);
    }
    Ok(TranslatedCone {
        apex,
        generators: gens,
    })
}

pub fn parse_cone(text: &str) -> Result<TranslatedCone> {
    let mut r = Reader::new(text);
    let c = read_cone(&mut r)?;
    r.finish()?;
    Ok(c)
}

pub fn parse_semilinear(text: &str) -> Result<SemilinearSet> {
    let mut r = Reader::new(text);
    let (no, args) = r.expect("semilinear")?;
    count(no, &args, 1)?;
    let dim: usize = num(no, &args[0])?;
    let mut components = Vec::new();
    while r.take_if("component").is_some() {
        let (nb, b) = r.expect("base")?;
        count(nb, &b, dim)?;
        let mut c = TranslatedCone::point(integers(nb, &b)?);
        while let Some((np, p)) = r.take_if("period") {
            count(np, &p, dim)?;
            c.generators.push(integers(np, &p)?);
        }
        components.push(c);
    }
    r.finish()?;
    Ok(SemilinearSet { dim, components })
}

pub fn parse_progressions(text: &str) -> Result<ProgressionSet> {
    let mut r = Reader::new(text);
    let mut p = ProgressionSet::default();
    if let Some((no, f)) = r.take_if("finite") {
        for x in &f {
            p.finite.insert(num(no, x)?);
        }
    }
    while let Some((no, a)) = r.take_if("prog") {
        count(no, &a, 2)?;
        let step: u64 = num(no, &a[1])?;
        if step == 0 {
            return Err(perr(no, "progression step must be positive"));
        }
        p.progressions.push((num(no, &a[0])?, step));
    }
    r.finish()?;
    Ok(p)
}

/// Orbit of `x0` under `Φ` against the coset `v0 + L`, `L` spanned by the
/// lattice generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeOrbit {
    pub phi: ZMatrix,
    pub x0: Vec<Int>,
    pub v0: Vec<Int>,
    pub gens: Vec<Vec<Int>>,
}

/// `mat`, `x0`, `v0`, then one `gen` line per lattice generator.
pub fn parse_lattice_orbit(text: &str) -> Result<LatticeOrbit> {
    let mut r = Reader::new(text);
    let phi = read_matrix(&mut r, integers)?;
    let dim = phi.rows();
    let x0 = read_x0(&mut r, dim, integers)?;
    let (nv, v) = r.expect("v0")?;
    count(nv, &v, dim)?;
    let v0 = integers(nv, &v)?;
    let mut gens = Vec::new();
    while let Some((ng, g)) = r.take_if("gen") {
        count(ng, &g, dim)?;
        gens.push(integers(ng, &g)?);
    }
    r.finish()?;
    Ok(LatticeOrbit { phi, x0, v0, gens })
}

pub fn write_lattice_orbit(o: &LatticeOrbit) -> String {
    let mut s = format!(
        "{}x0 {}\nv0 {}\n",
        write_zmatrix(&o.phi),
        join(&o.x0),
        join(&o.v0)
    );
    for g in &o.gens {
        s += &format!("gen {}\n", join(g));
    }
    s
}

// ---------------------------------------------------------------- orbit instances

fn read_x0<T>(
    r: &mut Reader,
    dim: usize,
    cell: impl Fn(usize, &[String]) -> Result<Vec<T>>,
) -> Result<Vec<T>> {
    let (no, x) = r.expect("x0")?;
    count(no, &x, dim)?;
    cell(no, &x)
}

fn read_min_power(r: &mut Reader) -> Result<usize> {
    match r.take_if("min_power") {
        Some((no, a)) => {
            count(no, &a, 1)?;
            num(no, &a[0])
        }
        None => Ok(0),
    }
}

/// Colored digraph, `mat`, `x0`, `relation <exact|down|up>`, optional `min_power`.
pub fn write_wwhp(inst: &WwhpInstance) -> String {
    let mut s = write_colored_digraph(&inst.graph);
    s += &write_zmatrix(&inst.phi);
    s += &format!(
        "x0 {}\nrelation {}\nmin_power {}\n",
        join(&inst.x0),
        inst.relation.name(),
        inst.min_power
    );
    if let Some(q) = inst.accepting_state {
        s += &format!("# accepting state {q}\n");
    }
    s
}

pub fn parse_wwhp(text: &str) -> Result<WwhpInstance> {
    let mut r = Reader::new(text);
    let graph = read_colored(&mut r)?;
    let phi = read_matrix(&mut r, integers)?;
    let x0 = read_x0(&mut r, phi.rows(), integers)?;
    let (no, rel) = r.expect("relation")?;
    count(no, &rel, 1)?;
    let relation = HitRelation::parse(&rel[0])
        .ok_or_else(|| perr(no, format!("unknown relation {:?}", rel[0])))?;
    let min_power = read_min_power(&mut r)?;
    r.finish()?;
    WwhpInstance::new(graph, phi, x0, relation, min_power).map_err(|e| perr(no, e.to_string()))
}

/// `mat`, `x0`, a cone record, optional `min_power`.
pub fn write_ihp(inst: &IhpInstance) -> String {
    format!(
        "{}x0 {}\n{}min_power {}\n",
        write_zmatrix(&inst.phi),
        join(&inst.x0),
        inst.cone,
        inst.min_power
    )
}

pub fn parse_ihp(text: &str) -> Result<IhpInstance> {
    let mut r = Reader::new(text);
    let phi = read_matrix(&mut r, integers)?;
    let x0 = read_x0(&mut r, phi.rows(), integers)?;
    let no = r.line_no();
    let cone = read_cone(&mut r)?;
    let min_power = read_min_power(&mut r)? as u64;
    r.finish()?;
    IhpInstance::new(phi, x0, cone, min_power).map_err(|e| perr(no, e.to_string()))
}

fn read_function(no: usize, args: &[String], dim: usize) -> Result<AffineFunction> {
    count(no, args, dim + 1)?;
    let v = rationals(no, args)?;
    Ok(AffineFunction::new(v[..dim].to_vec(), v[dim].clone()))
}

fn write_function(h: &AffineFunction) -> String {
    format!("h {} {}\n", qjoin(&h.coeffs), h.constant)
}

fn signs(no: usize, args: &[String]) -> Result<Vec<i8>> {
    args.iter()
        .map(|s| match s.as_str() {
            "+1" | "1" | "+" => Ok(1),
            "0" => Ok(0),
            "-1" | "-" => Ok(-1),
            other => Err(perr(no, format!("bad sign {other:?}"))),
        })
        .collect()
}

fn sign_text(s: &[i8]) -> String {
    s.iter()
        .map(|x| format!("{x:+}").replace("+0", "0"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// One of the four orbit problems over rational data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HitInstance {
    Chp(ChpInstance),
    Odp(OdpInstance),
    Shp(ShpInstance),
    Plp(PlpInstance),
}

/// `mat`, `x0`, then one of: a `chamber` block (`h` lines, `sign`); an
/// `odp` block (`h` lines, then `sign` lines, one per allowed chamber);
/// `subspace` blocks of `h` lines; a `polyhedron` block of `h` lines read
/// as `h(x) >= 0`.
pub fn parse_hit_instance(text: &str) -> Result<HitInstance> {
    let mut r = Reader::new(text);
    let phi = read_matrix(&mut r, rationals)?;
    let dim = phi.rows();
    let x0 = read_x0(&mut r, dim, rationals)?;
    let no = r.line_no();
    let read_fns = |r: &mut Reader| -> Result<Vec<AffineFunction>> {
        let mut v = Vec::new();
        while let Some((nh, h)) = r.take_if("h") {
            v.push(read_function(nh, &h, dim)?);
        }
        Ok(v)
    };
    let inst = match r.peek() {
        Some("chamber") => {
            r.next();
            let fns = read_fns(&mut r)?;
            let (ns, s) = r.expect("sign")?;
            let chamber = Chamber::new(fns, signs(ns, &s)?).map_err(|e| perr(ns, e.to_string()))?;
            HitInstance::Chp(
                ChpInstance::new(phi, x0, chamber).map_err(|e| perr(no, e.to_string()))?,
            )
        }
        Some("odp") => {
            r.next();
            let fns = read_fns(&mut r)?;
            let mut pats = Vec::new();
            while let Some((ns, s)) = r.take_if("sign") {
                pats.push(signs(ns, &s)?);
            }
            HitInstance::Odp(
                OdpInstance::new(phi, x0, fns, pats).map_err(|e| perr(no, e.to_string()))?,
            )
        }
        Some("subspace") => {
            let mut blocks = Vec::new();
            while r.take_if("subspace").is_some() {
                blocks.push(read_fns(&mut r)?);
            }
            HitInstance::Shp(
                ShpInstance::new(phi, x0, blocks).map_err(|e| perr(no, e.to_string()))?,
            )
        }
        Some("polyhedron") => {
            r.next();
            let fns = read_fns(&mut r)?;
            HitInstance::Plp(PlpInstance::new(phi, x0, fns).map_err(|e| perr(no, e.to_string()))?)
        }
        _ => {
            return Err(perr(
                no,
                "expected `chamber`, `odp`, `subspace` or `polyhedron`",
            ))
        }
    };
    r.finish()?;
    Ok(inst)
}

pub fn write_hit_instance(inst: &HitInstance) -> String {
    let head = |phi: &QMatrix, x0: &[Rational]| format!("{}x0 {}\n", write_qmatrix(phi), qjoin(x0));
    match inst {
        HitInstance::Chp(c) => {
            let mut s = head(&c.phi, &c.x0) + "chamber\n";
            for h in &c.chamber.functions {
                s += &write_function(h);
            }
            s + &format!("sign {}\n", sign_text(&c.chamber.signs))
        }
        HitInstance::Odp(o) => {
            let mut s = head(&o.phi, &o.x0) + "odp\n";
            for h in &o.functions {
                s += &write_function(h);
            }
            for p in &o.patterns {
                s += &format!("sign {}\n", sign_text(p));
            }
            s
        }
        HitInstance::Shp(sh) => {
            let mut s = head(&sh.phi, &sh.x0);
            for b in &sh.blocks {
                s += "subspace\n";
                for h in b {
                    s += &write_function(h);
                }
            }
            s
        }
        HitInstance::Plp(p) => {
            let mut s = head(&p.phi, &p.x0) + "polyhedron\n";
            for h in &p.inequalities {
                s += &write_function(h);
            }
            s
        }
    }
}

/// `mat`, `x0`, then `constraint <rel> <coeffs> <const>` lines with
/// `rel` one of `=0 <0 >0 <=0 >=0`.
pub fn parse_constraint_instance(text: &str) -> Result<ConstraintInstance> {
    let mut r = Reader::new(text);
    let phi = read_matrix(&mut r, rationals)?;
    let dim = phi.rows();
    let x0 = read_x0(&mut r, dim, rationals)?;
    let no = r.line_no();
    let mut constraints = Vec::new();
    while let Some((nc, c)) = r.take_if("constraint") {
        let rel = c
            .first()
            .and_then(|s| Relation::parse(s))
            .ok_or_else(|| perr(nc, "bad relation"))?;
        constraints.push(Constraint {
            h: read_function(nc, &c[1..], dim)?,
            rel,
        });
    }
    r.finish()?;
    ConstraintInstance::new(phi, x0, constraints).map_err(|e| perr(no, e.to_string()))
}

pub fn write_constraint_instance(inst: &ConstraintInstance) -> String {
    let mut s = format!("{}x0 {}\n", write_qmatrix(&inst.phi), qjoin(&inst.x0));
    for c in &inst.constraints {
        s += &format!(
            "constraint {} {} {}\n",
            c.rel,
            qjoin(&c.h.coeffs),
            c.h.constant
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ints, rat, rats};

    #[test]
    fn lrs_round_trip() {
        let s = Lrs::new(
            vec![rat(1), Rational::new(Int::from(-1), Int::from(2))],
            rats(&[3, 0]),
        )
        .unwrap();
        assert_eq!(parse_lrs(&s.to_string()).unwrap(), s);
        assert!(matches!(
            parse_lrs("lrs 2\na 1\nb 1 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_lrs("lrs 1\na 1/0\nb 1\n").is_err());
    }

    #[test]
    fn dfa_round_trip() {
        let a = Dfa::from_fn(&["0", "1", "#"], 2, 0, &[1], |q, s| (q + s) % 2).unwrap();
        assert_eq!(parse_dfa(&write_dfa(&a)).unwrap(), a);
        let partial = "dfa\nalphabet a\nstates 2\ninitial 0\naccepting 1\ntrans 0 a 1\n";
        assert!(parse_dfa(partial).is_err());
    }

    #[test]
    fn graph_and_set_round_trips() {
        let mut g = ColoredDigraph::new(2, 2, 0, 1);
        g.add_edge(0, 1, 1);
        g.add_edge(1, 1, 0);
        assert_eq!(
            parse_colored_digraph(&write_colored_digraph(&g)).unwrap(),
            g
        );
        let s = SemilinearSet {
            dim: 2,
            components: vec![TranslatedCone {
                apex: ints(&[1, 0]),
                generators: vec![ints(&[0, 2])],
            }],
        };
        assert_eq!(parse_semilinear(&s.to_string()).unwrap(), s);
        let c = TranslatedCone {
            apex: ints(&[0, 0]),
            generators: vec![ints(&[2, 0]), ints(&[1, 1])],
        };
        assert_eq!(parse_cone(&c.to_string()).unwrap(), c);
        let p = ProgressionSet {
            finite: [1, 4].into_iter().collect(),
            progressions: vec![(6, 3)],
        };
        assert_eq!(parse_progressions(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn hit_instances() {
        let text = "mat 2 2\n1 1\n1 0\nx0 1 1\nchamber\nh 1 0 -8\nsign 0\n";
        let inst = parse_hit_instance(text).unwrap();
        assert_eq!(
            parse_hit_instance(&write_hit_instance(&inst)).unwrap(),
            inst
        );
        let odp = "mat 1 1\n2\nx0 1\nodp\nh 1 0\nsign +1\nsign 0\n";
        let o = parse_hit_instance(odp).unwrap();
        assert!(matches!(&o, HitInstance::Odp(x) if x.patterns == vec![vec![1], vec![0]]));
        assert_eq!(parse_hit_instance(&write_hit_instance(&o)).unwrap(), o);
    }

    #[test]
    fn lattice_orbit_round_trip() {
        let text = "mat 2 2\n0 1\n1 0\nx0 1 0\nv0 0 0\ngen 2 0\ngen 0 1\n";
        let o = parse_lattice_orbit(text).unwrap();
        assert_eq!(o.gens.len(), 2);
        assert_eq!(parse_lattice_orbit(&write_lattice_orbit(&o)).unwrap(), o);
    }
}
