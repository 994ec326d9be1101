//! Intuitionistic propositional formulas.
//!
//! The engine works over the four-constructor core {→, ∨, ∧, ⊥}; negation,
//! equivalence and ⊤ are expanded at construction time. Subtrees are shared
//! through `Arc` so that machine-built formulas (characters, disjunctions over
//! model classes) stay compact, and forcing evaluates them as DAGs.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Bot,
    /// 1-indexed propositional variable.
    Var(u32),
    Imp(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
}

use Formula::*;

impl Formula {
    pub fn var(i: u32) -> Arc<Formula> {
        assert!(i >= 1, "variable indices are 1-based");
        Arc::new(Var(i))
    }

    pub fn bot() -> Arc<Formula> {
        Arc::new(Bot)
    }

    pub fn top() -> Arc<Formula> {
        Arc::new(Imp(Self::bot(), Self::bot()))
    }

    pub fn imp(a: Arc<Formula>, b: Arc<Formula>) -> Arc<Formula> {
        Arc::new(Imp(a, b))
    }

    pub fn or(a: Arc<Formula>, b: Arc<Formula>) -> Arc<Formula> {
        Arc::new(Or(a, b))
    }

    pub fn and(a: Arc<Formula>, b: Arc<Formula>) -> Arc<Formula> {
        Arc::new(And(a, b))
    }

    pub fn neg(a: Arc<Formula>) -> Arc<Formula> {
        Self::imp(a, Self::bot())
    }

    pub fn iff(a: Arc<Formula>, b: Arc<Formula>) -> Arc<Formula> {
        Self::and(Self::imp(a.clone(), b.clone()), Self::imp(b, a))
    }

    /// n-ary disjunction; the empty disjunction is ⊥.
    pub fn big_or(mut parts: Vec<Arc<Formula>>) -> Arc<Formula> {
        match parts.len() {
            0 => Self::bot(),
            1 => parts.pop().unwrap(),
            _ => {
                let mut acc = parts.pop().unwrap();
                while let Some(p) = parts.pop() {
                    acc = Self::or(p, acc);
                }
                acc
            }
        }
    }

    /// n-ary conjunction; the empty conjunction is ⊤.
    pub fn big_and(mut parts: Vec<Arc<Formula>>) -> Arc<Formula> {
        match parts.len() {
            0 => Self::top(),
            1 => parts.pop().unwrap(),
            _ => {
                let mut acc = parts.pop().unwrap();
                while let Some(p) = parts.pop() {
                    acc = Self::and(p, acc);
                }
                acc
            }
        }
    }

    /// Largest variable index occurring in the formula (0 when closed).
    pub fn max_var(&self) -> u32 {
        let mut memo: HashMap<*const Formula, u32> = HashMap::new();
        fn go(f: &Formula, memo: &mut HashMap<*const Formula, u32>) -> u32 {
            match f {
                Bot => 0,
                Var(i) => *i,
                Imp(a, b) | Or(a, b) | And(a, b) => {
                    let ka = Arc::as_ptr(a);
                    let va = memo.get(&ka).copied().unwrap_or_else(|| {
                        let v = go(a, memo);
                        memo.insert(ka, v);
                        v
                    });
                    let kb = Arc::as_ptr(b);
                    let vb = memo.get(&kb).copied().unwrap_or_else(|| {
                        let v = go(b, memo);
                        memo.insert(kb, v);
                        v
                    });
                    va.max(vb)
                }
            }
        }
        go(self, &mut memo)
    }

    /// Set of free variables as a bitmask (bit i-1 for x_i); caps at 64 vars.
    pub fn free_vars(&self) -> u64 {
        match self {
            Bot => 0,
            Var(i) => 1 << (i - 1),
            Imp(a, b) | Or(a, b) | And(a, b) => a.free_vars() | b.free_vars(),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Precedence levels: -> loosest (0), then <->(unused on core), | (2),
        // & (3), atoms (4). Right operands of -> print at the same level.
        fn go(x: &Formula, level: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let prec = match x {
                Imp(..) => 0,
                Or(..) => 2,
                And(..) => 3,
                Bot | Var(_) => 4,
            };
            let paren = prec < level;
            if paren {
                write!(f, "(")?;
            }
            match x {
                Bot => write!(f, "false")?,
                Var(i) => write!(f, "x{i}")?,
                Imp(a, b) => {
                    go(a, 1, f)?;
                    write!(f, " -> ")?;
                    go(b, 0, f)?;
                }
                Or(a, b) => {
                    go(a, 2, f)?;
                    write!(f, " | ")?;
                    go(b, 3, f)?;
                }
                And(a, b) => {
                    go(a, 3, f)?;
                    write!(f, " & ")?;
                    go(b, 4, f)?;
                }
            }
            if paren {
                write!(f, ")")?;
            }
            Ok(())
        }
        go(self, 0, f)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("parse error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("image of x{var} uses x{used}, beyond declared target size {target}")]
    TargetMismatch { var: u32, used: u32, target: u32 },
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    /// Start of the most recently peeked or consumed token, for errors.
    tok_start: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Arrow,
    Iff,
    Bar,
    Amp,
    Tilde,
    LPar,
    RPar,
    True,
    False,
    Var(u32),
    End,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            pos: 0,
            tok_start: 0,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.tok_start,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Result<(Tok, usize), ParseError> {
        self.skip_ws();
        self.tok_start = self.pos;
        let rest = &self.src[self.pos..];
        let start = self.pos;
        if rest.is_empty() {
            return Ok((Tok::End, start));
        }
        let tok = if rest.starts_with("<->") {
            (Tok::Iff, 3)
        } else if rest.starts_with("->") {
            (Tok::Arrow, 2)
        } else if rest.starts_with('|') {
            (Tok::Bar, 1)
        } else if rest.starts_with('&') {
            (Tok::Amp, 1)
        } else if rest.starts_with('~') {
            (Tok::Tilde, 1)
        } else if rest.starts_with('(') {
            (Tok::LPar, 1)
        } else if rest.starts_with(')') {
            (Tok::RPar, 1)
        } else if rest.starts_with("true") && !continues_word(rest, 4) {
            (Tok::True, 4)
        } else if rest.starts_with("false") && !continues_word(rest, 5) {
            (Tok::False, 5)
        } else if let Some(r) = rest.strip_prefix('x') {
            let digits: String = r.chars().take_while(|c| c.is_ascii_digit()).collect();
            if digits.is_empty() {
                return self.err("expected digits after `x`");
            }
            let i: u32 = digits
                .parse()
                .map_err(|_| ParseError::Syntax {
                    pos: start,
                    msg: "variable index out of range".into(),
                })?;
            if i == 0 {
                return self.err("variable indices start at 1");
            }
            (Tok::Var(i), 1 + digits.len())
        } else {
            return self.err(format!("unexpected `{}`", rest.chars().next().unwrap()));
        };
        Ok((tok.0, start + tok.1))
    }

    fn next(&mut self) -> Result<Tok, ParseError> {
        let (tok, end) = self.peek()?;
        self.pos = end;
        Ok(tok)
    }
}

fn continues_word(rest: &str, at: usize) -> bool {
    rest[at..]
        .chars()
        .next()
        .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses `F ::= F '->' F | F '<->' F | F '|' F | F '&' F | '~' F | '(' F ')'
/// | 'true' | 'false' | x<digits>` with precedence ~ > & > | > <-> > -> and
/// right-associative -> and <->. Sugar is expanded into the core connectives.
pub fn parse_formula(src: &str) -> Result<Arc<Formula>, ParseError> {
    let mut lx = Lexer::new(src);
    let f = parse_imp(&mut lx)?;
    match lx.next()? {
        Tok::End => Ok(f),
        t => lx.err(format!("trailing input `{t:?}`")),
    }
}

fn parse_imp(lx: &mut Lexer) -> Result<Arc<Formula>, ParseError> {
    let lhs = parse_iff(lx)?;
    if let (Tok::Arrow, end) = lx.peek()? {
        lx.pos = end;
        let rhs = parse_imp(lx)?;
        return Ok(Formula::imp(lhs, rhs));
    }
    Ok(lhs)
}

fn parse_iff(lx: &mut Lexer) -> Result<Arc<Formula>, ParseError> {
    let lhs = parse_or(lx)?;
    if let (Tok::Iff, end) = lx.peek()? {
        lx.pos = end;
        let rhs = parse_iff(lx)?;
        return Ok(Formula::iff(lhs, rhs));
    }
    Ok(lhs)
}

fn parse_or(lx: &mut Lexer) -> Result<Arc<Formula>, ParseError> {
    let mut acc = parse_and(lx)?;
    while let (Tok::Bar, end) = lx.peek()? {
        lx.pos = end;
        let rhs = parse_and(lx)?;
        acc = Formula::or(acc, rhs);
    }
    Ok(acc)
}

fn parse_and(lx: &mut Lexer) -> Result<Arc<Formula>, ParseError> {
    let mut acc = parse_unary(lx)?;
    while let (Tok::Amp, end) = lx.peek()? {
        lx.pos = end;
        let rhs = parse_unary(lx)?;
        acc = Formula::and(acc, rhs);
    }
    Ok(acc)
}

fn parse_unary(lx: &mut Lexer) -> Result<Arc<Formula>, ParseError> {
    match lx.next()? {
        Tok::Tilde => Ok(Formula::neg(parse_unary(lx)?)),
        Tok::LPar => {
            let f = parse_imp(lx)?;
            match lx.next()? {
                Tok::RPar => Ok(f),
                _ => lx.err("expected `)`"),
            }
        }
        Tok::True => Ok(Formula::top()),
        Tok::False => Ok(Formula::bot()),
        Tok::Var(i) => Ok(Formula::var(i)),
        t => lx.err(format!("expected a formula, found `{t:?}`")),
    }
}

/// A finite substitution `{x1..xn} -> Fm^k`. Variables beyond the domain act
/// as identity under application.
#[derive(Debug, Clone)]
pub struct Substitution {
    /// Domain size n.
    pub domain: u32,
    /// Target size k: every image lives in Fm^k.
    pub target: u32,
    images: Vec<Arc<Formula>>,
}

impl Substitution {
    pub fn new(domain: u32, target: u32, images: Vec<Arc<Formula>>) -> Substitution {
        assert_eq!(images.len(), domain as usize);
        for img in &images {
            assert!(img.max_var() <= target, "image uses variable beyond target");
        }
        Substitution {
            domain,
            target,
            images,
        }
    }

    pub fn identity(n: u32) -> Substitution {
        Substitution {
            domain: n,
            target: n,
            images: (1..=n).map(Formula::var).collect(),
        }
    }

    pub fn image(&self, var: u32) -> Arc<Formula> {
        if var >= 1 && var <= self.domain {
            self.images[(var - 1) as usize].clone()
        } else {
            Formula::var(var)
        }
    }

    pub fn images(&self) -> &[Arc<Formula>] {
        &self.images
    }

    /// Homomorphic application; variables outside the domain are left alone.
    pub fn apply(&self, f: &Arc<Formula>) -> Arc<Formula> {
        let mut memo: HashMap<*const Formula, Arc<Formula>> = HashMap::new();
        self.apply_memo(f, &mut memo)
    }

    fn apply_memo(
        &self,
        f: &Arc<Formula>,
        memo: &mut HashMap<*const Formula, Arc<Formula>>,
    ) -> Arc<Formula> {
        if let Some(hit) = memo.get(&Arc::as_ptr(f)) {
            return hit.clone();
        }
        let out = match f.as_ref() {
            Bot => f.clone(),
            Var(i) => self.image(*i),
            Imp(a, b) => Formula::imp(self.apply_memo(a, memo), self.apply_memo(b, memo)),
            Or(a, b) => Formula::or(self.apply_memo(a, memo), self.apply_memo(b, memo)),
            And(a, b) => Formula::and(self.apply_memo(a, memo), self.apply_memo(b, memo)),
        };
        memo.insert(Arc::as_ptr(f), out.clone());
        out
    }

    /// `compose(alpha, tau)` is `alpha . tau`: apply `tau` first, then
    /// `alpha`, so on the domain of `tau`,
    /// `compose(alpha, tau).apply(A) = alpha.apply(tau.apply(A))`.
    pub fn compose(alpha: &Substitution, tau: &Substitution) -> Substitution {
        let images = (1..=tau.domain)
            .map(|i| alpha.apply(&tau.image(i)))
            .collect();
        Substitution {
            domain: tau.domain,
            target: alpha.target,
            images,
        }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vars {}", self.target)?;
        for (i, img) in self.images.iter().enumerate() {
            write!(f, "; x{} := {}", i + 1, img)?;
        }
        Ok(())
    }
}

/// Parses the substitution format: a `vars k` header then assignments
/// `x<i> := <formula>`, separated by `;` or newlines. The domain is the
/// largest assigned index; unassigned variables below it default to identity.
pub fn parse_substitution(src: &str) -> Result<Substitution, ParseError> {
    let mut target: Option<u32> = None;
    let mut assigns: Vec<(u32, Arc<Formula>)> = Vec::new();
    for raw in src.split(|c| c == ';' || c == '\n') {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("vars") {
            let k: u32 = rest.trim().parse().map_err(|_| ParseError::Syntax {
                pos: 0,
                msg: format!("bad `vars` header `{line}`"),
            })?;
            target = Some(k);
            continue;
        }
        let (lhs, rhs) = line.split_once(":=").ok_or_else(|| ParseError::Syntax {
            pos: 0,
            msg: format!("expected `x<i> := <formula>`, found `{line}`"),
        })?;
        let lhs = lhs.trim();
        let i: u32 = lhs
            .strip_prefix('x')
            .and_then(|d| d.parse().ok())
            .filter(|&i| i >= 1)
            .ok_or_else(|| ParseError::Syntax {
                pos: 0,
                msg: format!("bad variable `{lhs}`"),
            })?;
        assigns.push((i, parse_formula(rhs)?));
    }
    let target = target.ok_or_else(|| ParseError::Syntax {
        pos: 0,
        msg: "missing `vars <k>` header".into(),
    })?;
    let domain = assigns.iter().map(|&(i, _)| i).max().unwrap_or(0);
    let mut images: Vec<Arc<Formula>> = (1..=domain).map(Formula::var).collect();
    for (i, f) in assigns {
        images[(i - 1) as usize] = f;
    }
    for (i, img) in images.iter().enumerate() {
        let used = img.max_var();
        if used > target {
            return Err(ParseError::TargetMismatch {
                var: i as u32 + 1,
                used,
                target,
            });
        }
    }
    Ok(Substitution {
        domain,
        target,
        images,
    })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown axiom `{0}`")]
pub struct UnknownAxiom(pub String);

/// Axioms of the named intermediate logics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomName {
    Kc,
    Lc,
    Sl,
    Pwl,
    /// Bounded depth, n >= 1.
    H(u32),
    /// Bounded branching, n >= 1.
    B(u32),
}

impl AxiomName {
    pub fn parse(name: &str) -> Result<AxiomName, UnknownAxiom> {
        match name {
            "KC" => Ok(AxiomName::Kc),
            "LC" => Ok(AxiomName::Lc),
            "SL" => Ok(AxiomName::Sl),
            "PWL" => Ok(AxiomName::Pwl),
            _ => {
                let (head, digits) = name.split_at(1);
                let n: u32 = digits.parse().map_err(|_| UnknownAxiom(name.into()))?;
                match head {
                    "H" if n >= 1 => Ok(AxiomName::H(n)),
                    "B" if n >= 1 => Ok(AxiomName::B(n)),
                    _ => Err(UnknownAxiom(name.into())),
                }
            }
        }
    }
}

/// The exact formula for each named axiom.
pub fn axiom(name: AxiomName) -> Arc<Formula> {
    let x = Formula::var;
    match name {
        // ~x1 | ~~x1
        AxiomName::Kc => Formula::or(Formula::neg(x(1)), Formula::neg(Formula::neg(x(1)))),
        // (x1 -> x2) | (x2 -> x1)
        AxiomName::Lc => Formula::or(Formula::imp(x(1), x(2)), Formula::imp(x(2), x(1))),
        // ((~~x1 -> x1) -> ~x1 | ~~x1) -> ~x1 | ~~x1
        AxiomName::Sl => {
            let weak = Formula::or(Formula::neg(x(1)), Formula::neg(Formula::neg(x(1))));
            Formula::imp(
                Formula::imp(
                    Formula::imp(Formula::neg(Formula::neg(x(1))), x(1)),
                    weak.clone(),
                ),
                weak,
            )
        }
        // (x2 -> x1) | (((x1 -> x2) -> x1) -> x1)
        AxiomName::Pwl => Formula::or(
            Formula::imp(x(2), x(1)),
            Formula::imp(Formula::imp(Formula::imp(x(1), x(2)), x(1)), x(1)),
        ),
        // H1 = x1 | ~x1,  H_{n+1} = x_{n+1} | (x_{n+1} -> H_n)
        AxiomName::H(n) => {
            let mut h = Formula::or(x(1), Formula::neg(x(1)));
            for i in 2..=n {
                h = Formula::or(x(i), Formula::imp(x(i), h));
            }
            h
        }
        // /\_{i<=n+1} ((x_i -> \/_{j!=i} x_j) -> \/_{j!=i} x_j) -> \/ x_i
        AxiomName::B(n) => {
            let m = n + 1;
            let mut conj = Vec::new();
            for i in 1..=m {
                let others = Formula::big_or((1..=m).filter(|&j| j != i).map(x).collect());
                conj.push(Formula::imp(Formula::imp(x(i), others.clone()), others));
            }
            Formula::imp(
                Formula::big_and(conj),
                Formula::big_or((1..=m).map(x).collect()),
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Arc<Formula> {
        parse_formula(s).unwrap()
    }

    #[test]
    fn kc_axiom_shape() {
        assert_eq!(p("~x1 | ~~x1"), axiom(AxiomName::Kc));
    }

    #[test]
    fn h1_axiom() {
        assert_eq!(p("x1 | ~x1"), axiom(AxiomName::H(1)));
    }

    #[test]
    fn lc_axiom() {
        assert_eq!(p("(x1 -> x2) | (x2 -> x1)"), axiom(AxiomName::Lc));
    }

    #[test]
    fn bot_implies() {
        assert_eq!(p("false -> x1"), Formula::imp(Formula::bot(), Formula::var(1)));
    }

    #[test]
    fn imp_right_assoc() {
        assert_eq!(p("x1 -> x2 -> x3"), p("x1 -> (x2 -> x3)"));
        assert_ne!(p("x1 -> x2 -> x3"), p("(x1 -> x2) -> x3"));
    }

    #[test]
    fn precedence_order() {
        // ~ > & > | > <-> > ->
        assert_eq!(p("~x1 & x2"), Formula::and(Formula::neg(Formula::var(1)), Formula::var(2)));
        assert_eq!(p("x1 & x2 | x3"), p("(x1 & x2) | x3"));
        assert_eq!(p("x1 | x2 <-> x3"), p("(x1 | x2) <-> x3"));
        assert_eq!(p("x1 <-> x2 -> x3"), p("(x1 <-> x2) -> x3"));
    }

    #[test]
    fn iff_expands() {
        assert_eq!(p("x1 <-> x2"), p("(x1 -> x2) & (x2 -> x1)"));
    }

    #[test]
    fn parse_error_position() {
        let err = parse_formula("x1 -> )").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { pos: 6, .. }));
    }

    #[test]
    fn substitution_example_eps1() {
        // epsilon_1: x1 := true, x2 := x2
        let s = parse_substitution("vars 2; x1 := true; x2 := x2").unwrap();
        assert_eq!(s.domain, 2);
        assert_eq!(s.target, 2);
        assert_eq!(s.image(1), Formula::top());
        assert_eq!(s.image(2), Formula::var(2));
    }

    #[test]
    fn substitution_to_closed() {
        let s = parse_substitution("vars 0; x1 := false").unwrap();
        assert_eq!(s.domain, 1);
        assert_eq!(s.target, 0);
        assert_eq!(s.image(1), Formula::bot());
    }

    #[test]
    fn substitution_unassigned_defaults_to_identity() {
        let s = parse_substitution("vars 2; x2 := true").unwrap();
        assert_eq!(s.domain, 2);
        assert_eq!(s.image(1), Formula::var(1));
        assert_eq!(s.image(2), Formula::top());
    }

    #[test]
    fn substitution_target_mismatch() {
        let err = parse_substitution("vars 1; x1 := x2").unwrap_err();
        assert!(matches!(err, ParseError::TargetMismatch { var: 1, used: 2, target: 1 }));
    }

    #[test]
    fn apply_neg_to_bot() {
        let s = parse_substitution("vars 0; x1 := false").unwrap();
        assert_eq!(s.apply(&p("~x1")), p("~false"));
    }

    #[test]
    fn compose_with_identity() {
        let s = parse_substitution("vars 1; x1 := ~x1").unwrap();
        let c = Substitution::compose(&Substitution::identity(1), &s);
        assert_eq!(c.image(1), s.image(1));
        let c2 = Substitution::compose(&s, &Substitution::identity(1));
        assert_eq!(c2.image(1), s.image(1));
    }

    #[test]
    fn compose_applies_outer_to_images() {
        let tau = parse_substitution("vars 2; x1 := x1 & x2").unwrap();
        let alpha = parse_substitution("vars 1; x1 := false; x2 := x1").unwrap();
        let c = Substitution::compose(&alpha, &tau);
        assert_eq!(c.image(1), p("false & x1"));
        assert_eq!(
            c.apply(&p("x1")),
            alpha.apply(&tau.apply(&p("x1")))
        );
    }

    #[test]
    fn display_round_trip_samples() {
        for s in [
            "~x1 | ~~x1",
            "x1 -> x2 -> x3",
            "(x1 -> x2) -> x3",
            "x1 & (x2 | x3) -> false",
            "((x1 | x2) & x3 -> x1) -> x2",
        ] {
            let f = p(s);
            let printed = f.to_string();
            assert_eq!(p(&printed), f, "round trip failed for `{s}` -> `{printed}`");
        }
    }

    mod round_trip {
        use super::*;
        use proptest::prelude::*;

        fn arb_formula() -> impl Strategy<Value = Arc<Formula>> {
            let leaf = prop_oneof![
                Just(Formula::bot()),
                (1u32..4).prop_map(Formula::var),
            ];
            leaf.prop_recursive(5, 64, 2, |inner| {
                prop_oneof![
                    (inner.clone(), inner.clone())
                        .prop_map(|(a, b)| Formula::imp(a, b)),
                    (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                    (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                    inner.prop_map(Formula::neg),
                ]
            })
        }

        proptest! {
            #[test]
            fn parse_inverts_print(f in arb_formula()) {
                let printed = f.to_string();
                prop_assert_eq!(parse_formula(&printed).unwrap(), f);
            }
        }
    }
}
