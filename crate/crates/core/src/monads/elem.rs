//! Carrier elements and monadic values.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::domains::{fmt_rational, parse_rational};

/// An element of a finite carrier.  Products and sums nest.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Elem {
    Unit,
    Num(BigRational),
    Sym(String),
    Pair(Box<Elem>, Box<Elem>),
    Inl(Box<Elem>),
    Inr(Box<Elem>),
}

impl Elem {
    pub fn sym(s: &str) -> Elem {
        Elem::Sym(s.to_string())
    }

    pub fn int(n: i64) -> Elem {
        Elem::Num(BigRational::from_integer(n.into()))
    }

    pub fn pair(a: Elem, b: Elem) -> Elem {
        Elem::Pair(Box::new(a), Box::new(b))
    }

    pub fn as_num(&self) -> Option<&BigRational> {
        match self {
            Elem::Num(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_pair(&self) -> Option<(&Elem, &Elem)> {
        match self {
            Elem::Pair(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Parses the textual form produced by `Display`.
    pub fn parse(s: &str) -> Option<Elem> {
        let mut p = ElemParser { s: s.as_bytes(), i: 0 };
        let e = p.elem()?;
        p.ws();
        (p.i == p.s.len()).then_some(e)
    }
}

struct ElemParser<'a> {
    s: &'a [u8],
    i: usize,
}

impl ElemParser<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.ws();
        if self.s.get(self.i) == Some(&c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn elem(&mut self) -> Option<Elem> {
        self.ws();
        if self.eat(b'(') {
            if self.eat(b')') {
                return Some(Elem::Unit);
            }
            let a = self.elem()?;
            if !self.eat(b',') {
                return None;
            }
            let b = self.elem()?;
            return self.eat(b')').then(|| Elem::pair(a, b));
        }
        let start = self.i;
        while self.i < self.s.len() {
            let c = self.s[self.i];
            if c.is_ascii_alphanumeric() || matches!(c, b'_' | b'-' | b'/' | b'.' | b'\'' | b'*') {
                self.i += 1;
            } else {
                break;
            }
        }
        let tok = std::str::from_utf8(&self.s[start..self.i]).ok()?;
        if tok.is_empty() {
            return None;
        }
        if tok == "inl" || tok == "inr" {
            if !self.eat(b'(') {
                return Some(Elem::sym(tok));
            }
            let a = self.elem()?;
            if !self.eat(b')') {
                return None;
            }
            return Some(if tok == "inl" { Elem::Inl(Box::new(a)) } else { Elem::Inr(Box::new(a)) });
        }
        if let Some(q) = parse_rational(tok) {
            return Some(Elem::Num(q));
        }
        Some(Elem::sym(tok))
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Unit => write!(f, "()"),
            Elem::Num(q) => write!(f, "{}", fmt_rational(q)),
            Elem::Sym(s) => write!(f, "{s}"),
            Elem::Pair(a, b) => write!(f, "({a},{b})"),
            Elem::Inl(a) => write!(f, "inl({a})"),
            Elem::Inr(a) => write!(f, "inr({a})"),
        }
    }
}

impl Serialize for Elem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A finite, ordered carrier set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Carrier {
    pub name: String,
    pub elems: Vec<Elem>,
}

impl Carrier {
    pub fn new(name: &str, elems: Vec<Elem>) -> Carrier {
        Carrier { name: name.to_string(), elems }
    }

    /// Symbolic atoms, e.g. `Carrier::named(&["x", "y"])`.
    pub fn named(names: &[&str]) -> Carrier {
        Carrier::new(&names.join(""), names.iter().map(|n| Elem::sym(n)).collect())
    }

    /// `{0, …, n-1}` as numbers.
    pub fn numeric(n: usize) -> Carrier {
        Carrier::new(&n.to_string(), (0..n as i64).map(Elem::int).collect())
    }

    /// Integers `lo..=hi`.
    pub fn range(lo: i64, hi: i64) -> Carrier {
        Carrier::new(&format!("[{lo},{hi}]"), (lo..=hi).map(Elem::int).collect())
    }

    pub fn unit() -> Carrier {
        Carrier::new("1", vec![Elem::Unit])
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, e: &Elem) -> bool {
        self.elems.contains(e)
    }

    pub fn index_of(&self, e: &Elem) -> Option<usize> {
        self.elems.iter().position(|x| x == e)
    }

    pub fn product(&self, other: &Carrier) -> Carrier {
        let mut elems = Vec::with_capacity(self.len() * other.len());
        for a in &self.elems {
            for b in &other.elems {
                elems.push(Elem::pair(a.clone(), b.clone()));
            }
        }
        Carrier::new(&format!("{}x{}", self.name, other.name), elems)
    }

    pub fn sum(&self, other: &Carrier) -> Carrier {
        let mut elems: Vec<Elem> = self.elems.iter().map(|a| Elem::Inl(Box::new(a.clone()))).collect();
        elems.extend(other.elems.iter().map(|b| Elem::Inr(Box::new(b.clone()))));
        Carrier::new(&format!("{}+{}", self.name, other.name), elems)
    }

    /// Default left-hand carriers for axiom checks: `x, y, z, u, …`.
    pub fn left_atoms(n: usize) -> Carrier {
        const NAMES: [&str; 6] = ["x", "y", "z", "u", "p", "q"];
        Carrier::named(&NAMES[..n.min(NAMES.len())])
    }

    /// Default right-hand carriers: `w, v, t, s, …`.
    pub fn right_atoms(n: usize) -> Carrier {
        const NAMES: [&str; 6] = ["w", "v", "t", "s", "r", "o"];
        Carrier::named(&NAMES[..n.min(NAMES.len())])
    }
}

/// A cost-tagged value of `ℕ × I` (costs may also be rational).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CostComp {
    #[serde(serialize_with = "ser_rational")]
    pub cost: BigRational,
    pub value: Elem,
}

fn ser_rational<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    if q.is_integer() {
        if let Ok(n) = i64::try_from(q.numer().clone()) {
            return s.serialize_i64(n);
        }
    }
    s.serialize_str(&fmt_rational(q))
}

impl CostComp {
    pub fn new(cost: i64, value: Elem) -> CostComp {
        CostComp { cost: BigRational::from_integer(cost.into()), value }
    }
}

/// A free Ω-term over variables drawn from a carrier.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OmegaTerm {
    Var(Elem),
    App(String, Vec<OmegaTerm>),
}

impl OmegaTerm {
    /// Nesting depth; variables and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            OmegaTerm::Var(_) => 0,
            OmegaTerm::App(_, args) if args.is_empty() => 0,
            OmegaTerm::App(_, args) => 1 + args.iter().map(|a| a.depth()).max().unwrap_or(0),
        }
    }

    pub fn app(f: &str, args: Vec<OmegaTerm>) -> OmegaTerm {
        OmegaTerm::App(f.to_string(), args)
    }

    pub fn var(name: &str) -> OmegaTerm {
        OmegaTerm::Var(Elem::sym(name))
    }

    /// Structural substitution, written independently of the monad's bind.
    pub fn substitute(&self, sigma: &dyn Fn(&Elem) -> OmegaTerm) -> OmegaTerm {
        match self {
            OmegaTerm::Var(x) => sigma(x),
            OmegaTerm::App(f, args) => {
                OmegaTerm::App(f.clone(), args.iter().map(|a| a.substitute(sigma)).collect())
            }
        }
    }

    /// Parses `f(a,x)`-style text; bare identifiers that are not nullary
    /// symbols of `sig` are variables.
    pub fn parse(s: &str, sig: &[(String, usize)]) -> Option<OmegaTerm> {
        let mut p = TermParser { s: s.as_bytes(), i: 0, sig };
        let t = p.term()?;
        p.ws();
        (p.i == p.s.len()).then_some(t)
    }
}

struct TermParser<'a> {
    s: &'a [u8],
    i: usize,
    sig: &'a [(String, usize)],
}

impl TermParser<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn term(&mut self) -> Option<OmegaTerm> {
        self.ws();
        let start = self.i;
        while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_') {
            self.i += 1;
        }
        let name = std::str::from_utf8(&self.s[start..self.i]).ok()?.to_string();
        if name.is_empty() {
            return None;
        }
        self.ws();
        if self.s.get(self.i) == Some(&b'(') {
            self.i += 1;
            let mut args = Vec::new();
            loop {
                args.push(self.term()?);
                self.ws();
                match self.s.get(self.i) {
                    Some(b',') => self.i += 1,
                    Some(b')') => {
                        self.i += 1;
                        break;
                    }
                    _ => return None,
                }
            }
            return Some(OmegaTerm::App(name, args));
        }
        if self.sig.iter().any(|(f, n)| *f == name && *n == 0) {
            Some(OmegaTerm::App(name, vec![]))
        } else {
            Some(OmegaTerm::Var(Elem::parse(&name).unwrap_or(Elem::Sym(name))))
        }
    }
}

impl Serialize for OmegaTerm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for OmegaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaTerm::Var(x) => write!(f, "{x}"),
            OmegaTerm::App(g, args) if args.is_empty() => write!(f, "{g}"),
            OmegaTerm::App(g, args) => {
                write!(f, "{g}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// An element of `T I` for one of the shipped monads.
///
/// `Dist` also represents sub-distributions and the composite
/// `D(C × −)`, whose support elements are `Pair(Num(cost), value)`.
/// `State` stores one `(value, next state)` entry per state, in the order
/// of the monad's state carrier.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Comp {
    Dist(BTreeMap<Elem, BigRational>),
    Cost(CostComp),
    Set(BTreeSet<CostComp>),
    State(Vec<(Elem, Elem)>),
    Term(OmegaTerm),
}

impl Comp {
    /// Builds a distribution, dropping zero weights and merging duplicates.
    pub fn dist<I: IntoIterator<Item = (Elem, BigRational)>>(items: I) -> Comp {
        let mut m: BTreeMap<Elem, BigRational> = BTreeMap::new();
        for (e, w) in items {
            if w.is_zero() {
                continue;
            }
            *m.entry(e).or_insert_with(BigRational::zero) += w;
        }
        m.retain(|_, w| !w.is_zero());
        Comp::Dist(m)
    }

    pub fn dirac(e: Elem) -> Comp {
        Comp::dist([(e, BigRational::one())])
    }

    pub fn as_dist(&self) -> Option<&BTreeMap<Elem, BigRational>> {
        match self {
            Comp::Dist(m) => Some(m),
            _ => None,
        }
    }

    /// Probability of `e` (zero when absent or not a distribution).
    pub fn weight(&self, e: &Elem) -> BigRational {
        self.as_dist().and_then(|m| m.get(e).cloned()).unwrap_or_else(BigRational::zero)
    }

    pub fn mass(&self) -> BigRational {
        self.as_dist().map(|m| m.values().sum()).unwrap_or_else(BigRational::zero)
    }

    /// Pushforward of a distribution along `g`.
    pub fn push(&self, g: impl Fn(&Elem) -> Elem) -> Comp {
        match self {
            Comp::Dist(m) => Comp::dist(m.iter().map(|(e, w)| (g(e), w.clone()))),
            other => other.clone(),
        }
    }
}

impl fmt::Display for Comp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Comp::Dist(m) => {
                write!(f, "[")?;
                for (i, (e, w)) in m.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{}·{}", fmt_rational(w), e)?;
                }
                if m.is_empty() {
                    write!(f, "0")?;
                }
                write!(f, "]")
            }
            Comp::Cost(c) => write!(f, "({},{})", fmt_rational(&c.cost), c.value),
            Comp::Set(s) => {
                write!(f, "{{")?;
                for (i, c) in s.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "({},{})", fmt_rational(&c.cost), c.value)?;
                }
                write!(f, "}}")
            }
            Comp::State(t) => {
                write!(f, "<")?;
                for (i, (v, s)) in t.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{v},{s}")?;
                }
                write!(f, ">")
            }
            Comp::Term(t) => write!(f, "{t}"),
        }
    }
}

impl Serialize for Comp {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        match self {
            Comp::Dist(m) => {
                let mut seq = s.serialize_seq(Some(m.len()))?;
                for (e, w) in m {
                    seq.serialize_element(&(e.to_string(), fmt_rational(w)))?;
                }
                seq.end()
            }
            Comp::Cost(c) => c.serialize(s),
            Comp::Set(set) => {
                let mut seq = s.serialize_seq(Some(set.len()))?;
                for c in set {
                    seq.serialize_element(c)?;
                }
                seq.end()
            }
            Comp::State(t) => {
                let mut seq = s.serialize_seq(Some(t.len()))?;
                for (v, st) in t {
                    seq.serialize_element(&(v.to_string(), st.to_string()))?;
                }
                seq.end()
            }
            Comp::Term(t) => s.serialize_str(&t.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::rat;

    #[test]
    fn elem_round_trip() {
        for s in ["x", "3", "-1/2", "()", "(a,(1,b))", "inl(())", "inr((0,w))"] {
            let e = Elem::parse(s).unwrap();
            assert_eq!(e.to_string(), s);
        }
        assert!(Elem::parse("(a,").is_none());
    }

    #[test]
    fn dist_normalizes() {
        let d = Comp::dist([(Elem::int(0), rat(1, 2)), (Elem::int(0), rat(1, 4)), (Elem::int(1), rat(0, 1))]);
        assert_eq!(d.as_dist().unwrap().len(), 1);
        assert_eq!(d.weight(&Elem::int(0)), rat(3, 4));
    }

    #[test]
    fn term_parse_and_depth() {
        let sig = vec![("f".to_string(), 1), ("a".to_string(), 0)];
        let t = OmegaTerm::parse("f(f(x))", &sig).unwrap();
        assert_eq!(t.depth(), 2);
        assert_eq!(OmegaTerm::parse("f(a)", &sig).unwrap().depth(), 1);
        assert_eq!(t.to_string(), "f(f(x))");
        assert_eq!(OmegaTerm::parse("a", &sig).unwrap(), OmegaTerm::app("a", vec![]));
    }
}
