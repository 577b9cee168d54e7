//! The shipped monad instances.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::elem::{Carrier, Comp, CostComp, Elem, OmegaTerm};
use crate::domains::rat;
use crate::error::{Error, Result};

/// Bounds for enumerating and sampling monadic values.
#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    /// Probabilities are multiples of `1/grid_denom`.
    pub grid_denom: u32,
    /// Largest cost produced by generators.
    pub cost_bound: u32,
    /// Largest term depth produced by generators.
    pub depth: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { grid_denom: 4, cost_bound: 3, depth: 3 }
    }
}

/// A monad presented as a Kleisli triple on finite carriers.
pub trait KleisliTriple: Send + Sync {
    fn name(&self) -> String;
    fn unit(&self, x: &Elem) -> Comp;
    fn bind(&self, c: &Comp, f: &dyn Fn(&Elem) -> Result<Comp>) -> Result<Comp>;
    /// Every element of `T carrier` within the bounds.
    fn enumerate(&self, carrier: &Carrier, cfg: &GenConfig) -> Vec<Comp>;
    fn sample(&self, carrier: &Carrier, cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Comp;
}

#[derive(Clone, Debug, PartialEq)]
pub enum Monad {
    /// Finitely supported probability distributions.
    Dist,
    /// Finitely supported sub-probability distributions.
    SubDist,
    /// The cost count monad `ℕ × −`.
    Cost,
    /// Nondeterminism with costs, `P(ℕ × −)`.
    PCost,
    /// `S ⇒ (− × S)` over a finite state carrier.
    State { states: Carrier },
    /// Free Ω-terms; each symbol carries its arity.
    Term { sig: Vec<(String, usize)> },
    /// The composite `D(C × −)` of distributions and costs.
    DistCost,
}

impl Monad {
    /// Resolves `dist`, `subdist`, `cost`, `pcost`, `dist-cost`,
    /// `state(s0,s1)` / `state(2)` and `term(f:1,a:0)`.
    pub fn by_name(name: &str) -> Result<Monad> {
        let name = name.trim();
        let unknown = || Error::Unknown { kind: "monad", name: name.to_string() };
        Ok(match name {
            "dist" => Monad::Dist,
            "subdist" => Monad::SubDist,
            "cost" => Monad::Cost,
            "pcost" => Monad::PCost,
            "dist-cost" => Monad::DistCost,
            _ => {
                let (head, args) = name
                    .strip_suffix(')')
                    .and_then(|r| r.split_once('('))
                    .ok_or_else(unknown)?;
                match head {
                    "state" => {
                        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
                        let states = match parts.as_slice() {
                            [n] if n.parse::<usize>().is_ok() => Carrier::numeric(n.parse().unwrap()),
                            _ => Carrier::new(
                                "S",
                                parts.iter().map(|p| Elem::parse(p).ok_or_else(unknown)).collect::<Result<_>>()?,
                            ),
                        };
                        Monad::State { states }
                    }
                    "term" => {
                        let mut sig = Vec::new();
                        for part in args.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                            let (f, n) = part.split_once(':').ok_or_else(unknown)?;
                            sig.push((f.trim().to_string(), n.trim().parse().map_err(|_| unknown())?));
                        }
                        Monad::Term { sig }
                    }
                    _ => return Err(unknown()),
                }
            }
        })
    }

    /// Parses a computation in the textual form produced by `Display`.
    /// Distributions also accept `e:w, e:w`.
    pub fn parse_comp(&self, src: &str) -> Result<Comp> {
        let bad = || Error::Parse { pos: Default::default(), msg: format!("not an element of the {} monad: {src}", self.name()) };
        let s = src.trim();
        let elem = |t: &str| Elem::parse(t).ok_or_else(bad);
        let cost_comp = |t: &str| -> Result<CostComp> {
            match elem(t)? {
                Elem::Pair(c, v) => match *c {
                    Elem::Num(q) => Ok(CostComp { cost: q, value: *v }),
                    _ => Err(bad()),
                },
                _ => Err(bad()),
            }
        };
        match self {
            Monad::Dist | Monad::SubDist | Monad::DistCost => {
                let body = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')).unwrap_or(s).trim();
                if body.is_empty() || body == "0" {
                    return Ok(Comp::dist([]));
                }
                let sep = if body.contains('·') || body.contains('*') { '+' } else { ',' };
                let mut items = Vec::new();
                for item in split_top(body, sep) {
                    let (e, w) = if let Some((w, e)) = item.split_once('·').or_else(|| item.split_once('*')) {
                        (e, w)
                    } else {
                        item.rsplit_once(':').ok_or_else(bad)?
                    };
                    let w = crate::domains::parse_rational(w.trim()).ok_or_else(bad)?;
                    items.push((elem(e)?, w));
                }
                Ok(Comp::dist(items))
            }
            Monad::Cost => Ok(Comp::Cost(cost_comp(s)?)),
            Monad::PCost => {
                let body = s.strip_prefix('{').and_then(|r| r.strip_suffix('}')).ok_or_else(bad)?.trim();
                let set = split_top(body, ',').into_iter().filter(|t| !t.trim().is_empty()).map(cost_comp).collect::<Result<_>>()?;
                Ok(Comp::Set(set))
            }
            Monad::State { .. } => {
                let body = s.strip_prefix('<').and_then(|r| r.strip_suffix('>')).ok_or_else(bad)?;
                let table = split_top(body, ';')
                    .into_iter()
                    .map(|t| {
                        let (v, st) = split_top(t, ',').into_iter().collect::<Vec<_>>().split_first().and_then(|(v, rest)| {
                            (rest.len() == 1).then(|| (v.to_string(), rest[0].to_string()))
                        }).ok_or_else(bad)?;
                        Ok((elem(&v)?, elem(&st)?))
                    })
                    .collect::<Result<_>>()?;
                Ok(Comp::State(table))
            }
            Monad::Term { sig } => OmegaTerm::parse(s, sig).map(Comp::Term).ok_or_else(bad),
        }
    }

    pub fn map(&self, c: &Comp, g: &dyn Fn(&Elem) -> Elem) -> Result<Comp> {
        self.bind(c, &|x| Ok(self.unit(&g(x))))
    }

    /// The strength applied to a global element: `θ(i, c) = c ≫= λj. η(i, j)`.
    pub fn strength(&self, i: &Elem, c: &Comp) -> Result<Comp> {
        self.bind(c, &|j| Ok(self.unit(&Elem::pair(i.clone(), j.clone()))))
    }

    /// Whether `c` is a well-formed element of `T carrier`.
    pub fn contains(&self, carrier: &Carrier, c: &Comp) -> bool {
        match (self, c) {
            (Monad::Dist, Comp::Dist(m)) => {
                m.keys().all(|e| carrier.contains(e)) && m.values().sum::<BigRational>().is_one()
            }
            (Monad::SubDist, Comp::Dist(m)) => {
                m.keys().all(|e| carrier.contains(e)) && m.values().sum::<BigRational>() <= BigRational::one()
            }
            (Monad::DistCost, Comp::Dist(m)) => {
                m.keys().all(|e| matches!(e.as_pair(), Some((Elem::Num(_), v)) if carrier.contains(v)))
                    && m.values().sum::<BigRational>().is_one()
            }
            (Monad::Cost, Comp::Cost(cc)) => carrier.contains(&cc.value),
            (Monad::PCost, Comp::Set(s)) => s.iter().all(|cc| carrier.contains(&cc.value)),
            (Monad::State { states }, Comp::State(t)) => {
                t.len() == states.len() && t.iter().all(|(v, s)| carrier.contains(v) && states.contains(s))
            }
            (Monad::Term { sig }, Comp::Term(t)) => term_ok(t, sig, carrier),
            _ => false,
        }
    }

    fn mismatch(&self, c: &Comp) -> Error {
        Error::CarrierMismatch(format!("{c} is not an element of the {} monad", self.name()))
    }
}

/// Splits on `sep` outside brackets.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '{' | '<' => depth += 1,
            ')' | ']' | '}' | '>' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn term_ok(t: &OmegaTerm, sig: &[(String, usize)], x: &Carrier) -> bool {
    match t {
        OmegaTerm::Var(v) => x.contains(v),
        OmegaTerm::App(f, args) => {
            sig.iter().any(|(g, n)| g == f && *n == args.len()) && args.iter().all(|a| term_ok(a, sig, x))
        }
    }
}

fn term_bind(t: &OmegaTerm, f: &dyn Fn(&Elem) -> Result<Comp>) -> Result<OmegaTerm> {
    match t {
        OmegaTerm::Var(x) => match f(x)? {
            Comp::Term(u) => Ok(u),
            other => Err(Error::CarrierMismatch(format!("{other} is not a term"))),
        },
        OmegaTerm::App(g, args) => {
            Ok(OmegaTerm::App(g.clone(), args.iter().map(|a| term_bind(a, f)).collect::<Result<_>>()?))
        }
    }
}

impl KleisliTriple for Monad {
    fn name(&self) -> String {
        match self {
            Monad::Dist => "dist".into(),
            Monad::SubDist => "subdist".into(),
            Monad::Cost => "cost".into(),
            Monad::PCost => "pcost".into(),
            Monad::DistCost => "dist-cost".into(),
            Monad::State { states } => {
                let s: Vec<String> = states.elems.iter().map(|e| e.to_string()).collect();
                format!("state({})", s.join(","))
            }
            Monad::Term { sig } => {
                let s: Vec<String> = sig.iter().map(|(f, n)| format!("{f}:{n}")).collect();
                format!("term({})", s.join(","))
            }
        }
    }

    fn unit(&self, x: &Elem) -> Comp {
        match self {
            Monad::Dist | Monad::SubDist => Comp::dirac(x.clone()),
            Monad::DistCost => Comp::dirac(Elem::pair(Elem::int(0), x.clone())),
            Monad::Cost => Comp::Cost(CostComp::new(0, x.clone())),
            Monad::PCost => Comp::Set(BTreeSet::from([CostComp::new(0, x.clone())])),
            Monad::State { states } => Comp::State(states.elems.iter().map(|s| (x.clone(), s.clone())).collect()),
            Monad::Term { .. } => Comp::Term(OmegaTerm::Var(x.clone())),
        }
    }

    fn bind(&self, c: &Comp, f: &dyn Fn(&Elem) -> Result<Comp>) -> Result<Comp> {
        match (self, c) {
            (Monad::Dist | Monad::SubDist, Comp::Dist(m)) => {
                let mut out: BTreeMap<Elem, BigRational> = BTreeMap::new();
                for (x, w) in m {
                    match f(x)? {
                        Comp::Dist(n) => {
                            for (y, v) in n {
                                *out.entry(y).or_insert_with(BigRational::zero) += w * v;
                            }
                        }
                        other => return Err(self.mismatch(&other)),
                    }
                }
                Ok(Comp::dist(out))
            }
            (Monad::DistCost, Comp::Dist(m)) => {
                let mut out: BTreeMap<Elem, BigRational> = BTreeMap::new();
                for (e, w) in m {
                    let Some((Elem::Num(n), x)) = e.as_pair() else {
                        return Err(self.mismatch(c));
                    };
                    match f(x)? {
                        Comp::Dist(inner) => {
                            for (e2, v) in inner {
                                let Some((Elem::Num(n2), y)) = e2.as_pair() else {
                                    return Err(self.mismatch(&Comp::dirac(e2.clone())));
                                };
                                let key = Elem::pair(Elem::Num(n + n2), y.clone());
                                *out.entry(key).or_insert_with(BigRational::zero) += w * &v;
                            }
                        }
                        other => return Err(self.mismatch(&other)),
                    }
                }
                Ok(Comp::dist(out))
            }
            (Monad::Cost, Comp::Cost(cc)) => match f(&cc.value)? {
                Comp::Cost(d) => Ok(Comp::Cost(CostComp { cost: &cc.cost + d.cost, value: d.value })),
                other => Err(self.mismatch(&other)),
            },
            (Monad::PCost, Comp::Set(s)) => {
                let mut out = BTreeSet::new();
                for cc in s {
                    match f(&cc.value)? {
                        Comp::Set(t) => {
                            for d in t {
                                out.insert(CostComp { cost: &cc.cost + d.cost, value: d.value });
                            }
                        }
                        other => return Err(self.mismatch(&other)),
                    }
                }
                Ok(Comp::Set(out))
            }
            (Monad::State { states }, Comp::State(t)) => {
                let mut out = Vec::with_capacity(t.len());
                for (x, s1) in t {
                    let Comp::State(g) = f(x)? else {
                        return Err(self.mismatch(c));
                    };
                    let i = states
                        .index_of(s1)
                        .ok_or_else(|| Error::CarrierMismatch(format!("unknown state {s1}")))?;
                    out.push(g.get(i).cloned().ok_or_else(|| self.mismatch(c))?);
                }
                Ok(Comp::State(out))
            }
            (Monad::Term { .. }, Comp::Term(t)) => Ok(Comp::Term(term_bind(t, f)?)),
            _ => Err(self.mismatch(c)),
        }
    }

    fn enumerate(&self, carrier: &Carrier, cfg: &GenConfig) -> Vec<Comp> {
        let d = cfg.grid_denom.max(1);
        match self {
            Monad::Dist => grid_dists(&carrier.elems, d, true),
            Monad::SubDist => grid_dists(&carrier.elems, d, false),
            Monad::DistCost => grid_dists(&cost_points(carrier, cfg.cost_bound), d, true),
            Monad::Cost => (0..=cfg.cost_bound as i64)
                .flat_map(|k| carrier.elems.iter().map(move |x| Comp::Cost(CostComp::new(k, x.clone()))))
                .collect(),
            Monad::PCost => {
                let pts: Vec<CostComp> = (0..=cfg.cost_bound as i64)
                    .flat_map(|k| carrier.elems.iter().map(move |x| CostComp::new(k, x.clone())))
                    .collect();
                assert!(pts.len() < 24, "pcost enumeration over {} points is too large", pts.len());
                (0u32..(1 << pts.len()))
                    .map(|mask| {
                        Comp::Set(pts.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| p.clone()).collect())
                    })
                    .collect()
            }
            Monad::State { states } => {
                let cells: Vec<(Elem, Elem)> = carrier
                    .elems
                    .iter()
                    .flat_map(|v| states.elems.iter().map(move |s| (v.clone(), s.clone())))
                    .collect();
                let n = states.len();
                let mut out = Vec::new();
                let mut idx = vec![0usize; n];
                if cells.is_empty() {
                    return out;
                }
                loop {
                    out.push(Comp::State(idx.iter().map(|&i| cells[i].clone()).collect()));
                    if !odometer(&mut idx, cells.len()) {
                        break;
                    }
                }
                out
            }
            Monad::Term { sig } => enumerate_terms(sig, carrier, cfg.depth).into_iter().map(Comp::Term).collect(),
        }
    }

    fn sample(&self, carrier: &Carrier, cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Comp {
        let d = cfg.grid_denom.max(1);
        match self {
            Monad::Dist => random_dist(&carrier.elems, d, d, rng),
            Monad::SubDist => {
                let total = rng.gen_range(0..=d);
                random_dist(&carrier.elems, total, d, rng)
            }
            Monad::DistCost => random_dist(&cost_points(carrier, cfg.cost_bound), d, d, rng),
            Monad::Cost => Comp::Cost(CostComp::new(
                rng.gen_range(0..=cfg.cost_bound as i64),
                carrier.elems[rng.gen_range(0..carrier.len())].clone(),
            )),
            Monad::PCost => {
                let mut s = BTreeSet::new();
                for k in 0..=cfg.cost_bound as i64 {
                    for x in &carrier.elems {
                        if rng.gen_bool(0.5) {
                            s.insert(CostComp::new(k, x.clone()));
                        }
                    }
                }
                Comp::Set(s)
            }
            Monad::State { states } => Comp::State(
                states
                    .elems
                    .iter()
                    .map(|_| {
                        (
                            carrier.elems[rng.gen_range(0..carrier.len())].clone(),
                            states.elems[rng.gen_range(0..states.len())].clone(),
                        )
                    })
                    .collect(),
            ),
            Monad::Term { sig } => Comp::Term(random_term(sig, carrier, cfg.depth, rng)),
        }
    }
}

/// Advances a mixed-radix counter; returns `false` after the last value.
pub fn odometer(idx: &mut [usize], radix: usize) -> bool {
    for d in idx.iter_mut() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

fn cost_points(carrier: &Carrier, k: u32) -> Vec<Elem> {
    (0..=k as i64)
        .flat_map(|c| carrier.elems.iter().map(move |x| Elem::pair(Elem::int(c), x.clone())))
        .collect()
}

/// All weight vectors on `points` with entries in `{0, 1/d, …}` summing to
/// one (`total`) or at most one.
fn grid_dists(points: &[Elem], d: u32, total: bool) -> Vec<Comp> {
    let mut out = Vec::new();
    let mut counts = vec![0u32; points.len()];
    fn rec(i: usize, left: u32, total: bool, counts: &mut Vec<u32>, points: &[Elem], d: u32, out: &mut Vec<Comp>) {
        if i == points.len() {
            if !total || left == 0 {
                out.push(Comp::dist(
                    points.iter().zip(counts.iter()).map(|(p, &c)| (p.clone(), rat(c as i64, d as i64))),
                ));
            }
            return;
        }
        for c in 0..=left {
            counts[i] = c;
            rec(i + 1, left - c, total, counts, points, d, out);
        }
        counts[i] = 0;
    }
    if points.is_empty() {
        if !total {
            out.push(Comp::dist([]));
        }
        return out;
    }
    rec(0, d, total, &mut counts, points, d, &mut out);
    out
}

fn random_dist(points: &[Elem], units: u32, d: u32, rng: &mut ChaCha8Rng) -> Comp {
    let mut counts = vec![0i64; points.len()];
    if !points.is_empty() {
        for _ in 0..units {
            counts[rng.gen_range(0..points.len())] += 1;
        }
    }
    Comp::dist(points.iter().zip(counts).map(|(p, c)| (p.clone(), rat(c, d as i64))))
}

/// Terms of depth at most `depth`, ordered by depth and then structurally.
pub fn enumerate_terms(sig: &[(String, usize)], vars: &Carrier, depth: usize) -> Vec<OmegaTerm> {
    let mut by_depth: Vec<Vec<OmegaTerm>> = Vec::new();
    let mut level0: Vec<OmegaTerm> = vars.elems.iter().map(|x| OmegaTerm::Var(x.clone())).collect();
    level0.extend(sig.iter().filter(|(_, n)| *n == 0).map(|(f, _)| OmegaTerm::App(f.clone(), vec![])));
    by_depth.push(level0);
    for d in 1..=depth {
        let upto: Vec<OmegaTerm> = by_depth.iter().flatten().cloned().collect();
        let mut level = Vec::new();
        for (f, n) in sig.iter().filter(|(_, n)| *n > 0) {
            let mut idx = vec![0usize; *n];
            loop {
                let args: Vec<OmegaTerm> = idx.iter().map(|&i| upto[i].clone()).collect();
                if args.iter().map(|a| a.depth()).max().unwrap_or(0) == d - 1 {
                    level.push(OmegaTerm::App(f.clone(), args));
                }
                if !odometer(&mut idx, upto.len()) {
                    break;
                }
            }
        }
        by_depth.push(level);
    }
    by_depth.into_iter().flatten().collect()
}

fn random_term(sig: &[(String, usize)], vars: &Carrier, depth: usize, rng: &mut ChaCha8Rng) -> OmegaTerm {
    let leaves: Vec<OmegaTerm> = vars
        .elems
        .iter()
        .map(|x| OmegaTerm::Var(x.clone()))
        .chain(sig.iter().filter(|(_, n)| *n == 0).map(|(f, _)| OmegaTerm::App(f.clone(), vec![])))
        .collect();
    let ops: Vec<&(String, usize)> = sig.iter().filter(|(_, n)| *n > 0).collect();
    if depth == 0 || ops.is_empty() || rng.gen_bool(0.4) {
        return leaves[rng.gen_range(0..leaves.len())].clone();
    }
    let (f, n) = ops[rng.gen_range(0..ops.len())];
    OmegaTerm::App(f.clone(), (0..*n).map(|_| random_term(sig, vars, depth - 1, rng)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cost_bind_adds() {
        let m = Monad::Cost;
        let c = Comp::Cost(CostComp::new(2, Elem::sym("x")));
        let r = m.bind(&c, &|_| Ok(Comp::Cost(CostComp::new(3, Elem::sym("y"))))).unwrap();
        assert_eq!(r, Comp::Cost(CostComp::new(5, Elem::sym("y"))));
    }

    #[test]
    fn dist_bind_mixture() {
        let m = Monad::Dist;
        let c = Comp::dist([(Elem::int(0), rat(1, 2)), (Elem::int(1), rat(1, 2))]);
        let f = |x: &Elem| {
            Ok(if *x == Elem::int(0) {
                Comp::dirac(Elem::sym("a"))
            } else {
                Comp::dist([(Elem::sym("a"), rat(1, 2)), (Elem::sym("b"), rat(1, 2))])
            })
        };
        let r = m.bind(&c, &f).unwrap();
        // Oracle: enumerate outcome paths and accumulate.
        let mut a = BigRational::zero();
        let mut b = BigRational::zero();
        for (w0, inner) in [(rat(1, 2), vec![("a", rat(1, 1))]), (rat(1, 2), vec![("a", rat(1, 2)), ("b", rat(1, 2))])] {
            for (y, w1) in inner {
                if y == "a" {
                    a += &w0 * w1;
                } else {
                    b += &w0 * w1;
                }
            }
        }
        assert_eq!(r.weight(&Elem::sym("a")), a);
        assert_eq!(r.weight(&Elem::sym("b")), b);
        assert_eq!(a, rat(3, 4));
    }

    #[test]
    fn strengths() {
        let a = Elem::sym("a");
        let d = Monad::Dist.strength(&a, &Comp::dirac(Elem::sym("b"))).unwrap();
        assert_eq!(d, Comp::dirac(Elem::pair(a.clone(), Elem::sym("b"))));
        let c = Monad::Cost.strength(&a, &Comp::Cost(CostComp::new(3, Elem::sym("b")))).unwrap();
        assert_eq!(c, Comp::Cost(CostComp::new(3, Elem::pair(a.clone(), Elem::sym("b")))));
        let s = Comp::Set([CostComp::new(1, Elem::sym("b")), CostComp::new(2, Elem::sym("c"))].into());
        let r = Monad::PCost.strength(&a, &s).unwrap();
        let expected: BTreeSet<CostComp> = [("b", 1), ("c", 2)]
            .iter()
            .map(|(y, k)| CostComp::new(*k, Elem::pair(a.clone(), Elem::sym(y))))
            .collect();
        assert_eq!(r, Comp::Set(expected));
    }

    #[test]
    fn grid_sizes() {
        let cfg = GenConfig { grid_denom: 2, cost_bound: 1, depth: 2 };
        assert_eq!(Monad::Dist.enumerate(&Carrier::numeric(3), &cfg).len(), 6);
        assert_eq!(Monad::SubDist.enumerate(&Carrier::numeric(2), &cfg).len(), 6);
        assert_eq!(Monad::Cost.enumerate(&Carrier::numeric(2), &cfg).len(), 4);
        assert_eq!(Monad::PCost.enumerate(&Carrier::numeric(1), &cfg).len(), 4);
        let st = Monad::State { states: Carrier::numeric(2) };
        assert_eq!(st.enumerate(&Carrier::numeric(2), &cfg).len(), 16);
        let tm = Monad::by_name("term(f:1,a:0)").unwrap();
        assert_eq!(tm.enumerate(&Carrier::named(&["x"]), &cfg).len(), 6);
    }

    #[test]
    fn names_round_trip() {
        for n in ["dist", "subdist", "cost", "pcost", "dist-cost", "state(0,1)", "term(f:1,a:0)"] {
            assert_eq!(Monad::by_name(n).unwrap().name(), n);
        }
        assert!(Monad::by_name("list").is_err());
    }

    #[test]
    fn printed_computations_parse_back() {
        let cfg = GenConfig { grid_denom: 2, cost_bound: 1, depth: 2 };
        let x = Carrier::numeric(2);
        for name in ["dist", "subdist", "cost", "pcost", "dist-cost", "state(0,1)", "term(f:1,a:0)"] {
            let m = Monad::by_name(name).unwrap();
            for c in m.enumerate(&x, &cfg) {
                assert_eq!(m.parse_comp(&c.to_string()).unwrap(), c, "{name}: {c}");
            }
        }
        let d = Monad::Dist.parse_comp("0:1/4, 1:3/4").unwrap();
        assert_eq!(d.weight(&Elem::int(1)), rat(3, 4));
        assert!(Monad::Cost.parse_comp("(x,1)").is_err());
    }

    #[test]
    fn mismatch_is_an_error() {
        let r = Monad::Cost.bind(&Comp::dirac(Elem::Unit), &|x| Ok(Monad::Cost.unit(x)));
        assert!(matches!(r, Err(Error::CarrierMismatch(_))));
    }
}
