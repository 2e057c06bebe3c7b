//! Unary-input transductions as sequences `n ↦ f(aⁿ)`.
//!
//! Polynomial word expressions denote such sequences (`⟦e*⟧(n) = ⟦e⟧(n)ⁿ`).
//! Every copyless SST over a one-letter input is captured, past an initial
//! segment, by a periodic family of star-height ≤ 1 expressions; cfp
//! expressions are captured inductively with star-height ≤ rank+1. Both
//! extractions end with a mandatory brute-force self-check: the index
//! bookkeeping (which power of the loop assignment matches which input
//! length) is exactly the kind of arithmetic that silently drifts by one.
//!
//! The β_c/polynomial-set apparatus at the end witnesses poly-uniformity:
//! block lengths of extracted sequences are covered by finitely many
//! polynomials, which is what the `b aⁿ⁻¹ b … b a b` counterexample violates.

use crate::alphabet::{Alphabet, Dfa, Word};
use crate::assign::{idempotent_power, substitute_mixed, Monoid, Tok};
use crate::cfp::{eval_cfp, rank_bound, validate_cfp, CfpExpr};
use crate::sst::{check_copyless, phi_image, psi_image, run_sst, Sst};
use crate::{Error, Result};
use num_rational::Rational64;
use num_traits::Zero;
use std::collections::BTreeSet;
use std::fmt;

/// `e ::= w | e·e′ | e*` with `⟦e*⟧(n) = (⟦e⟧(n))ⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyWordExpr {
    Lit(Word),
    Cat(Box<PolyWordExpr>, Box<PolyWordExpr>),
    Star(Box<PolyWordExpr>),
}

impl PolyWordExpr {
    pub fn lit(w: Word) -> PolyWordExpr {
        PolyWordExpr::Lit(w)
    }

    pub fn cat(a: PolyWordExpr, b: PolyWordExpr) -> PolyWordExpr {
        PolyWordExpr::Cat(Box::new(a), Box::new(b))
    }

    pub fn star(e: PolyWordExpr) -> PolyWordExpr {
        PolyWordExpr::Star(Box::new(e))
    }

    pub fn alphabet(&self) -> &Alphabet {
        match self {
            PolyWordExpr::Lit(w) => w.alphabet(),
            PolyWordExpr::Cat(a, _) => a.alphabet(),
            PolyWordExpr::Star(e) => e.alphabet(),
        }
    }
}

/// Right-assoc concatenation of many factors; `ε` for none.
pub fn cat_all(alphabet: &Alphabet, mut factors: Vec<PolyWordExpr>) -> PolyWordExpr {
    match factors.len() {
        0 => PolyWordExpr::Lit(Word::empty(alphabet.clone())),
        1 => factors.pop().unwrap(),
        _ => {
            let mut e = factors.pop().unwrap();
            while let Some(f) = factors.pop() {
                e = PolyWordExpr::cat(f, e);
            }
            e
        }
    }
}

/// All literals must live over one alphabet.
pub fn validate_pwe(e: &PolyWordExpr) -> Result<()> {
    fn go(e: &PolyWordExpr, a: &Alphabet) -> Result<()> {
        match e {
            PolyWordExpr::Lit(w) => {
                if w.alphabet() != a {
                    return Err(Error::AlphabetMismatch(
                        "literals of one expression must share an alphabet".into(),
                    ));
                }
                Ok(())
            }
            PolyWordExpr::Cat(x, y) => {
                go(x, a)?;
                go(y, a)
            }
            PolyWordExpr::Star(x) => go(x, a),
        }
    }
    go(e, e.alphabet())
}

pub fn eval_pwe(e: &PolyWordExpr, n: usize) -> Word {
    match e {
        PolyWordExpr::Lit(w) => w.clone(),
        PolyWordExpr::Cat(a, b) => eval_pwe(a, n).concat(&eval_pwe(b, n)).unwrap(),
        PolyWordExpr::Star(a) => eval_pwe(a, n).repeat(n),
    }
}

pub fn star_height(e: &PolyWordExpr) -> usize {
    match e {
        PolyWordExpr::Lit(_) => 0,
        PolyWordExpr::Cat(a, b) => star_height(a).max(star_height(b)),
        PolyWordExpr::Star(a) => 1 + star_height(a),
    }
}

/// Split literals into single letters so that substitution applies per letter.
pub fn normalize_pwe(e: &PolyWordExpr) -> PolyWordExpr {
    match e {
        PolyWordExpr::Lit(w) if w.len() >= 2 => {
            let letters = (0..w.len())
                .map(|i| PolyWordExpr::Lit(w.slice(i..i + 1)))
                .collect();
            cat_all(w.alphabet(), letters)
        }
        PolyWordExpr::Lit(_) => e.clone(),
        PolyWordExpr::Cat(a, b) => PolyWordExpr::cat(normalize_pwe(a), normalize_pwe(b)),
        PolyWordExpr::Star(a) => PolyWordExpr::star(normalize_pwe(a)),
    }
}

/// Replace each letter `i` of `e` (literals must have length ≤ 1) by
/// `subs[i]`, realizing `⟦e[(e′ᵢ)]⟧(n) = CbS(⟦e⟧, (⟦e′ᵢ⟧))` at parameter `n`.
pub fn substitute_pwe(e: &PolyWordExpr, subs: &[(String, PolyWordExpr)]) -> Result<PolyWordExpr> {
    let target = subs
        .first()
        .map(|(_, s)| s.alphabet().clone())
        .ok_or_else(|| Error::Invalid("substitution needs at least one binding".into()))?;
    fn go(
        e: &PolyWordExpr,
        subs: &[(String, PolyWordExpr)],
        target: &Alphabet,
    ) -> Result<PolyWordExpr> {
        match e {
            PolyWordExpr::Lit(w) => match w.len() {
                0 => Ok(PolyWordExpr::Lit(Word::empty(target.clone()))),
                1 => {
                    let name = w.symbol_at(0);
                    subs.iter()
                        .find(|(i, _)| i == name)
                        .map(|(_, s)| s.clone())
                        .ok_or_else(|| Error::UnknownSymbol(name.to_owned()))
                }
                _ => Err(Error::Invalid(
                    "substitution needs normalized literals of length ≤ 1".into(),
                )),
            },
            PolyWordExpr::Cat(a, b) => Ok(PolyWordExpr::cat(
                go(a, subs, target)?,
                go(b, subs, target)?,
            )),
            PolyWordExpr::Star(a) => Ok(PolyWordExpr::star(go(a, subs, target)?)),
        }
    }
    go(e, subs, &target)
}

/// Reparameterize: `⟦stretch(e,c,d)⟧(n) = ⟦e⟧(cn+d)`. Literals are constant;
/// `(e)*` at `cn+d` is `(e^c)ⁿ · e^d` once `e` itself is stretched.
pub fn stretch_pwe(e: &PolyWordExpr, c: usize, d: usize) -> Result<PolyWordExpr> {
    if c == 0 {
        return Err(Error::Invalid("stretch needs c ≥ 1".into()));
    }
    Ok(stretch_rec(e, c, d))
}

fn stretch_rec(e: &PolyWordExpr, c: usize, d: usize) -> PolyWordExpr {
    match e {
        PolyWordExpr::Lit(_) => e.clone(),
        PolyWordExpr::Cat(a, b) => PolyWordExpr::cat(stretch_rec(a, c, d), stretch_rec(b, c, d)),
        PolyWordExpr::Star(a) => {
            let s = stretch_rec(a, c, d);
            let alphabet = e.alphabet();
            let repeated = cat_all(alphabet, vec![s.clone(); c]);
            let mut factors = vec![PolyWordExpr::star(repeated)];
            factors.extend(std::iter::repeat_with(|| s.clone()).take(d));
            cat_all(alphabet, factors)
        }
    }
}

/// Past the stored initial segment `s(0), …, s(p−1)`, the sequence is given
/// residue-wise: `⟦exprs[m]⟧(n) = s((n+1)p + m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PumpingFamily {
    pub alphabet: Alphabet,
    pub period: usize,
    pub initial: Vec<Word>,
    pub exprs: Vec<PolyWordExpr>,
}

impl PumpingFamily {
    pub fn validate(&self) -> Result<()> {
        if self.period == 0 {
            return Err(Error::Invalid("family period must be positive".into()));
        }
        if self.initial.len() != self.period || self.exprs.len() != self.period {
            return Err(Error::Invalid(
                "family needs exactly `period` initial words and expressions".into(),
            ));
        }
        for w in &self.initial {
            if *w.alphabet() != self.alphabet {
                return Err(Error::AlphabetMismatch("family initial segment alphabet".into()));
            }
        }
        for e in &self.exprs {
            validate_pwe(e)?;
            if *e.alphabet() != self.alphabet {
                return Err(Error::AlphabetMismatch("family expression alphabet".into()));
            }
        }
        Ok(())
    }

    pub fn max_star_height(&self) -> usize {
        self.exprs.iter().map(star_height).max().unwrap_or(0)
    }
}

/// The word at index `n` of the sequence described by `fam`.
pub fn eval_family(fam: &PumpingFamily, n: usize) -> Result<Word> {
    fam.validate()?;
    let p = fam.period;
    if n < p {
        Ok(fam.initial[n].clone())
    } else {
        Ok(eval_pwe(&fam.exprs[n % p], n / p - 1))
    }
}

const IDEMPOTENT_CAP: u64 = 100_000;

/// Build the pumping family of a copyless SST over a one-letter input.
///
/// The period is an idempotent power `p` of the erased one-letter action in
/// `M^cl ≀ Q`. Anchoring residue `k` at the values after `a^{p+k}` and
/// writing `γ` for the loop assignment at the recurrent state, a live
/// register `r` with `γ(r) = u_r · r · v_r` evolves as
/// `(γ^⊙(u_r))ⁿ · (value at the anchor) · (γ^⊙(v_r))ⁿ`, and a dead register
/// stays at the constant `γ(r)`. That closed form is valid as soon as the
/// dead registers feeding `u_r`/`v_r` have stabilized, which one extra loop
/// always guarantees: we try `p` directly, checking stability exactly, and
/// fall back to `2p`.
pub fn extract_pumping_family(t: &Sst) -> Result<PumpingFamily> {
    t.validate()?;
    if t.input.len() != 1 {
        return Err(Error::Inapplicable("pumping families need a one-letter input".into()));
    }
    if !check_copyless(t) {
        return Err(Error::Inapplicable("pumping families need a copyless machine".into()));
    }
    let a = Word::from_indices(t.input.clone(), vec![0]);
    let (m0, _) = idempotent_power(&phi_image(t, &a)?, IDEMPOTENT_CAP)?;
    let m0 = m0 as usize;
    for p in [m0, 2 * m0] {
        if let Some(fam) = try_family(t, p)? {
            self_check_family(&fam, |n| run_sst(t, &unary(&t.input, n)), 8)?;
            return Ok(fam);
        }
    }
    Err(Error::SelfCheck(
        "no stable anchor at either candidate period; loop decomposition is off".into(),
    ))
}

fn unary(input: &Alphabet, n: usize) -> Word {
    Word::from_indices(input.clone(), vec![0; n])
}

/// Build the family at period `p`, or report the anchor as unstable.
fn try_family(t: &Sst, p: usize) -> Result<Option<PumpingFamily>> {
    let loop_psi = psi_image(t, &unary(&t.input, p))?;
    let mut exprs = Vec::with_capacity(p);
    for k in 0..p {
        let (q_k, prefix) = {
            let w = psi_image(t, &unary(&t.input, p + k))?;
            let (q, a) = w.apply(t.initial);
            (q, a.clone())
        };
        let anchor = prefix.dagger(&t.initial_values)?;
        let (q_loop, gamma) = loop_psi.apply(q_k);
        if q_loop != q_k {
            return Ok(None); // not yet recurrent; the longer period will be
        }
        let beta = gamma.erase();
        if beta.mul(&beta) != beta {
            return Ok(None);
        }
        // constants reached by dead registers after one more loop
        let mut settled = vec![Word::empty(t.output.clone()); t.registers.len()];
        for r in 0..t.registers.len() as u32 {
            if beta.image_of(r).is_empty() {
                debug_assert!(gamma.image_of(r).registers().next().is_none());
                settled[r as usize] = substitute_mixed(gamma.image_of(r), &settled, &t.output)?;
            }
        }
        let used: BTreeSet<u32> = t.output_fn[q_k].registers().collect();
        let mut per_register = vec![None; t.registers.len()];
        for &r in &used {
            let e = if beta.image_of(r).is_empty() {
                if anchor[r as usize] != settled[r as usize] {
                    return Ok(None); // constant not yet reached at this anchor
                }
                PolyWordExpr::Lit(anchor[r as usize].clone())
            } else {
                let image = &gamma.image_of(r).0;
                let Some(at) = image.iter().position(|&tok| tok == Tok::Reg(r)) else {
                    return Ok(None);
                };
                let u = crate::assign::MixedWord(image[..at].to_vec());
                let v = crate::assign::MixedWord(image[at + 1..].to_vec());
                if u.registers().chain(v.registers()).any(|r2| {
                    r2 == r || !beta.image_of(r2).is_empty()
                }) {
                    return Ok(None);
                }
                let x = substitute_mixed(&u, &settled, &t.output)?;
                let y = substitute_mixed(&v, &settled, &t.output)?;
                let a_val = substitute_mixed(&u, &anchor, &t.output)?;
                let b_val = substitute_mixed(&v, &anchor, &t.output)?;
                let mid = &anchor[r as usize];
                let grown = a_val.concat(mid)?.concat(&b_val)?;
                if grown != x.concat(mid)?.concat(&y)? {
                    return Ok(None); // u_r/v_r still see unsettled registers
                }
                let mut factors = Vec::new();
                if x.len() > 0 {
                    factors.push(PolyWordExpr::star(PolyWordExpr::Lit(x)));
                }
                factors.push(PolyWordExpr::Lit(mid.clone()));
                if y.len() > 0 {
                    factors.push(PolyWordExpr::star(PolyWordExpr::Lit(y)));
                }
                cat_all(&t.output, factors)
            };
            per_register[r as usize] = Some(e);
        }
        let factors = t.output_fn[q_k]
            .0
            .iter()
            .map(|tok| match *tok {
                Tok::Out(c) => PolyWordExpr::Lit(Word::from_indices(t.output.clone(), vec![c])),
                Tok::Reg(r) => per_register[r as usize].clone().unwrap(),
            })
            .collect();
        exprs.push(cat_all(&t.output, factors));
    }
    let initial = (0..p)
        .map(|n| run_sst(t, &unary(&t.input, n)))
        .collect::<Result<_>>()?;
    Ok(Some(PumpingFamily {
        alphabet: t.output.clone(),
        period: p,
        initial,
        exprs,
    }))
}

/// Compare the family against direct evaluation on every index up to
/// `max(floor, 3·period + 2)`; a mismatch is a hard error.
fn self_check_family<F>(fam: &PumpingFamily, mut direct: F, floor: usize) -> Result<()>
where
    F: FnMut(usize) -> Result<Word>,
{
    let hi = floor.max(3 * fam.period + 2).min(fam.period + 48);
    for n in 0..=hi {
        let got = eval_family(fam, n)?;
        let want = direct(n)?;
        if got != want {
            return Err(Error::SelfCheck(format!(
                "family disagrees with the machine at n={n}: family {got}, machine {want}"
            )));
        }
    }
    Ok(())
}

pub const CFP_RANK_BOUND: usize = 4;

/// Inductively extract a pumping family from a cfp expression over a
/// one-letter input. Periods of the pieces are synchronized by lcm and
/// reindexed with [`stretch_pwe`]; composition-by-substitution becomes
/// expression substitution; conditionals reduce to the eventual period of
/// the guard DFA on `aⁿ`.
pub fn extract_cfp_family(e: &CfpExpr) -> Result<PumpingFamily> {
    validate_cfp(e)?;
    if e.input_alphabet().len() != 1 {
        return Err(Error::Inapplicable("cfp families need a one-letter input".into()));
    }
    if rank_bound(e) > CFP_RANK_BOUND {
        return Err(Error::Bound(format!("rank bound exceeds {CFP_RANK_BOUND}")));
    }
    let fam = extract_rec(e)?;
    self_check_family(&fam, |n| eval_cfp(e, &unary(e.input_alphabet(), n)), 6)?;
    Ok(fam)
}

/// `⟦residue_expr(fam, P, m)⟧(n) = s(P(n+1) + m)` when `period | P`: the
/// inner parameter is `(P/p)·n + (P/p + ⌊m/p⌋ − 1)`.
fn residue_expr(fam: &PumpingFamily, big_p: usize, m: usize) -> Result<PolyWordExpr> {
    let p = fam.period;
    debug_assert_eq!(big_p % p, 0);
    let c = big_p / p;
    let d = c + m / p - 1;
    stretch_pwe(&fam.exprs[m % p], c, d)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

pub const FAMILY_PERIOD_BOUND: usize = 512;

fn extract_rec(e: &CfpExpr) -> Result<PumpingFamily> {
    match e {
        CfpExpr::Reg(t) => extract_pumping_family(t),
        CfpExpr::Cbs { outer, subs } => {
            let fam_f = extract_rec(outer)?;
            let fams: Vec<(String, PumpingFamily)> = subs
                .iter()
                .map(|(i, s)| Ok((i.clone(), extract_rec(s)?)))
                .collect::<Result<_>>()?;
            let p = fams.iter().fold(fam_f.period, |acc, (_, f)| lcm(acc, f.period));
            check_period(p)?;
            let exprs = (0..p)
                .map(|m| {
                    let shell = normalize_pwe(&residue_expr(&fam_f, p, m)?);
                    let bindings = fams
                        .iter()
                        .map(|(i, f)| Ok((i.clone(), residue_expr(f, p, m)?)))
                        .collect::<Result<Vec<_>>>()?;
                    substitute_pwe(&shell, &bindings)
                })
                .collect::<Result<_>>()?;
            assemble(e, p, exprs)
        }
        CfpExpr::Cond { dfa, then, otherwise } => {
            let (tail, cycle) = unary_rho_shape(dfa);
            let fam_then = extract_rec(then)?;
            let fam_else = extract_rec(otherwise)?;
            let base = lcm(lcm(fam_then.period, fam_else.period), cycle);
            let p = base * tail.div_ceil(base).max(1);
            check_period(p)?;
            let exprs = (0..p)
                .map(|m| {
                    let rep = unary(&dfa.alphabet, p + m);
                    let branch = if dfa.accepts(&rep)? { &fam_then } else { &fam_else };
                    residue_expr(branch, p, m)
                })
                .collect::<Result<_>>()?;
            assemble(e, p, exprs)
        }
        CfpExpr::Concat(l, r) => {
            let fam_l = extract_rec(l)?;
            let fam_r = extract_rec(r)?;
            let p = lcm(fam_l.period, fam_r.period);
            check_period(p)?;
            let exprs = (0..p)
                .map(|m| {
                    Ok(PolyWordExpr::cat(
                        residue_expr(&fam_l, p, m)?,
                        residue_expr(&fam_r, p, m)?,
                    ))
                })
                .collect::<Result<_>>()?;
            assemble(e, p, exprs)
        }
    }
}

fn check_period(p: usize) -> Result<()> {
    if p > FAMILY_PERIOD_BOUND {
        return Err(Error::Bound(format!(
            "synchronized family period {p} exceeds {FAMILY_PERIOD_BOUND}"
        )));
    }
    Ok(())
}

fn assemble(e: &CfpExpr, p: usize, exprs: Vec<PolyWordExpr>) -> Result<PumpingFamily> {
    let initial = (0..p)
        .map(|n| eval_cfp(e, &unary(e.input_alphabet(), n)))
        .collect::<Result<_>>()?;
    Ok(PumpingFamily {
        alphabet: e.output_alphabet().clone(),
        period: p,
        initial,
        exprs,
    })
}

/// Tail length and cycle length of `q₀, δ(q₀,a), δ(q₀,aa), …`.
fn unary_rho_shape(dfa: &Dfa) -> (usize, usize) {
    let mut seen = vec![None; dfa.states.len()];
    let mut q = dfa.initial;
    let mut i = 0usize;
    loop {
        if let Some(first) = seen[q] {
            return (first, i - first);
        }
        seen[q] = Some(i);
        q = dfa.delta[q][0];
        i += 1;
    }
}

/// Lengths of the maximal `{c}*`-factors of `w`, including empty ones: the
/// runs of `c` delimited by other letters or the word ends.
pub fn beta_blocks(w: &Word, c: &str) -> Result<BTreeSet<usize>> {
    let c = w
        .alphabet()
        .index_of(c)
        .ok_or_else(|| Error::UnknownSymbol(c.to_owned()))?;
    let mut out = BTreeSet::new();
    let mut run = 0usize;
    for &x in w.letters() {
        if x == c {
            run += 1;
        } else {
            out.insert(run);
            run = 0;
        }
    }
    out.insert(run);
    Ok(out)
}

/// A univariate polynomial over ℚ, coefficients low-to-high, no trailing
/// zeros.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Poly(Vec<Rational64>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rational64>) -> Poly {
        while coeffs.last().is_some_and(Rational64::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn constant(q: Rational64) -> Poly {
        Poly::new(vec![q])
    }

    pub fn constant_nat(k: usize) -> Poly {
        Poly::constant(Rational64::from_integer(k as i64))
    }

    pub fn x() -> Poly {
        Poly::new(vec![Rational64::zero(), Rational64::from_integer(1)])
    }

    pub fn coeffs(&self) -> &[Rational64] {
        &self.0
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let mut out = vec![Rational64::zero(); self.0.len().max(rhs.0.len())];
        for (i, &c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, &c) in rhs.0.iter().enumerate() {
            out[i] += c;
        }
        Poly::new(out)
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.0.is_empty() || rhs.0.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![Rational64::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Multiply by the indeterminate.
    pub fn mul_x(&self) -> Poly {
        if self.0.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![Rational64::zero()];
        out.extend_from_slice(&self.0);
        Poly::new(out)
    }

    /// `self(inner(X))` by Horner's rule.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for &c in self.0.iter().rev() {
            acc = acc.mul(inner).add(&Poly::constant(c));
        }
        acc
    }

    pub fn eval(&self, n: i64) -> Rational64 {
        let x = Rational64::from_integer(n);
        let mut acc = Rational64::zero();
        for &c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 if *c == Rational64::from_integer(1) => write!(f, "X")?,
                1 => write!(f, "{c}·X")?,
                _ if *c == Rational64::from_integer(1) => write!(f, "X^{i}")?,
                _ => write!(f, "{c}·X^{i}")?,
            }
        }
        Ok(())
    }
}

/// A finite set of polynomials, compared and evaluated exactly.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PolySet(pub BTreeSet<Poly>);

impl PolySet {
    pub fn union(&self, rhs: &PolySet) -> PolySet {
        PolySet(self.0.union(&rhs.0).cloned().collect())
    }

    /// Pairwise sums `{P + Q}`.
    pub fn sums(&self, rhs: &PolySet) -> PolySet {
        PolySet(
            self.0
                .iter()
                .flat_map(|p| rhs.0.iter().map(move |q| p.add(q)))
                .collect(),
        )
    }

    pub fn mul_x(&self) -> PolySet {
        PolySet(self.0.iter().map(Poly::mul_x).collect())
    }

    pub fn values_at(&self, n: usize) -> BTreeSet<Rational64> {
        self.0.iter().map(|p| p.eval(n as i64)).collect()
    }

    pub fn covers(&self, n: usize, blocks: &BTreeSet<usize>) -> bool {
        let vals = self.values_at(n);
        blocks
            .iter()
            .all(|&k| vals.contains(&Rational64::from_integer(k as i64)))
    }
}

fn singleton(p: Poly) -> PolySet {
    PolySet(BTreeSet::from([p]))
}

/// Per-expression covering data: all block lengths, the prefix run, the
/// suffix run, the total length on the all-`c` branch, and whether the value
/// is guaranteed to stay inside `{c}*`.
struct Uniform {
    blocks: PolySet,
    prefix: PolySet,
    suffix: PolySet,
    full: PolySet,
    always_c: bool,
}

/// A finite `A_{e,c} ⊆ ℚ[X]` with `β_c(⟦e⟧(n)) ⊆ A_{e,c}(n)` for all `n` and
/// `0 ∈ A_{e,c}`.
///
/// Literals contribute their blocks; concatenation adds the seam sums
/// `suffix + prefix`; a starred expression contributes its inner blocks, the
/// merged all-`c` block `X·|⟦e⟧(n)|`, and (unless the body stays in `{c}*`,
/// where no seam survives) the seam sums again.
pub fn poly_uniform_sets(e: &PolyWordExpr, c: &str) -> Result<PolySet> {
    validate_pwe(e)?;
    let c = e
        .alphabet()
        .index_of(c)
        .ok_or_else(|| Error::UnknownSymbol(c.to_owned()))?;
    Ok(uniform_rec(e, c).blocks)
}

fn uniform_rec(e: &PolyWordExpr, c: u32) -> Uniform {
    match e {
        PolyWordExpr::Lit(w) => {
            let mut blocks = PolySet::default();
            let mut run = 0usize;
            let mut prefix = None;
            for &x in w.letters() {
                if x == c {
                    run += 1;
                } else {
                    blocks.0.insert(Poly::constant_nat(run));
                    prefix.get_or_insert(run);
                    run = 0;
                }
            }
            blocks.0.insert(Poly::constant_nat(run));
            blocks.0.insert(Poly::zero());
            let all_c = w.letters().iter().all(|&x| x == c);
            Uniform {
                blocks,
                prefix: singleton(Poly::constant_nat(prefix.unwrap_or(w.len()))),
                suffix: singleton(Poly::constant_nat(run)),
                full: if all_c {
                    singleton(Poly::constant_nat(w.len()))
                } else {
                    PolySet::default()
                },
                always_c: all_c,
            }
        }
        PolyWordExpr::Cat(a, b) => {
            let ua = uniform_rec(a, c);
            let ub = uniform_rec(b, c);
            let seam = ua.suffix.sums(&ub.prefix);
            Uniform {
                blocks: ua.blocks.union(&ub.blocks).union(&seam),
                prefix: ua.prefix.union(&ua.full.sums(&ub.prefix)),
                suffix: ub.suffix.union(&ua.suffix.sums(&ub.full)),
                full: ua.full.sums(&ub.full),
                always_c: ua.always_c && ub.always_c,
            }
        }
        PolyWordExpr::Star(a) => {
            let u = uniform_rec(a, c);
            let zero = singleton(Poly::zero());
            let merged = u.full.mul_x();
            let mut blocks = u.blocks.union(&merged).union(&zero);
            if !u.always_c {
                blocks = blocks.union(&u.suffix.sums(&u.prefix));
            }
            Uniform {
                prefix: u.prefix.union(&merged).union(&zero),
                suffix: u.suffix.union(&merged).union(&zero),
                full: merged.union(&zero),
                always_c: u.always_c,
                blocks,
            }
        }
    }
}

/// Covering sets for a whole family: residue expressions are reindexed by
/// `X ↦ (X−m)/p − 1` (inverting `n ↦ p(n+1)+m`), and the initial segment
/// contributes its blocks as constants.
pub fn family_uniform_sets(fam: &PumpingFamily, c: &str) -> Result<PolySet> {
    fam.validate()?;
    let sym = c;
    fam.alphabet
        .index_of(sym)
        .ok_or_else(|| Error::UnknownSymbol(sym.to_owned()))?;
    let p = fam.period as i64;
    let mut out = PolySet::default();
    for (m, e) in fam.exprs.iter().enumerate() {
        let inner = Poly::new(vec![
            Rational64::new(-(m as i64) - p, p),
            Rational64::new(1, p),
        ]);
        for q in poly_uniform_sets(e, sym)?.0 {
            out.0.insert(q.compose(&inner));
        }
    }
    for w in &fam.initial {
        for k in beta_blocks(w, sym)? {
            out.0.insert(Poly::constant_nat(k));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfp::build_cfsquaring;
    use crate::machines;

    fn lit(a: &Alphabet, s: &str) -> PolyWordExpr {
        PolyWordExpr::Lit(Word::parse(a, s).unwrap())
    }

    #[test]
    fn eval_and_height() {
        let g = Alphabet::new(["a", "b", "u", "v", "x"]).unwrap();
        assert_eq!(eval_pwe(&PolyWordExpr::star(lit(&g, "a b")), 3).to_string(), "a b a b a b");
        assert_eq!(eval_pwe(&lit(&g, "x"), 7).to_string(), "x");
        let e = PolyWordExpr::cat(lit(&g, "u"), PolyWordExpr::star(lit(&g, "v")));
        assert_eq!(eval_pwe(&e, 2).to_string(), "u v v");
        assert_eq!(star_height(&lit(&g, "a")), 0);
        assert_eq!(star_height(&PolyWordExpr::star(PolyWordExpr::star(lit(&g, "a")))), 2);
    }

    #[test]
    fn substitution_is_cbs_pointwise() {
        let names = Alphabet::new(["i", "j"]).unwrap();
        let g = Alphabet::new(["a", "b"]).unwrap();
        let subs = vec![
            ("i".to_owned(), lit(&g, "a b")),
            ("j".to_owned(), PolyWordExpr::star(lit(&g, "b"))),
        ];
        let e = substitute_pwe(&PolyWordExpr::star(lit(&names, "i")), &subs).unwrap();
        assert_eq!(eval_pwe(&e, 2).to_string(), "a b a b");
        // single letter: e[(e'_i)] = e'_j
        let e = substitute_pwe(&lit(&names, "j"), &subs).unwrap();
        assert_eq!(e, subs[1].1);
        // longer literals must be normalized first
        assert!(substitute_pwe(&lit(&names, "i j"), &subs).is_err());
        let e = substitute_pwe(&normalize_pwe(&lit(&names, "i j")), &subs).unwrap();
        assert_eq!(eval_pwe(&e, 3).to_string(), "a b b b b");
    }

    #[test]
    fn stretch_reindexes() {
        let g = Alphabet::new(["a", "b"]).unwrap();
        let e = PolyWordExpr::star(lit(&g, "a"));
        let s = stretch_pwe(&e, 2, 1).unwrap();
        for n in 0..5 {
            assert_eq!(eval_pwe(&s, n), eval_pwe(&e, 2 * n + 1), "n={n}");
        }
        assert_eq!(star_height(&s), star_height(&e));
        let e = PolyWordExpr::cat(lit(&g, "b"), PolyWordExpr::star(PolyWordExpr::star(lit(&g, "a"))));
        let s = stretch_pwe(&e, 3, 2).unwrap();
        for n in 0..4 {
            assert_eq!(eval_pwe(&s, n), eval_pwe(&e, 3 * n + 2), "n={n}");
        }
        assert_eq!(star_height(&s), 2);
        assert!(stretch_pwe(&e, 0, 1).is_err());
    }

    #[test]
    fn identity_family_is_a_power_progression() {
        let g = Alphabet::new(["a"]).unwrap();
        let fam = extract_pumping_family(&machines::identity_sst(&g)).unwrap();
        assert_eq!(fam.period, 1);
        assert_eq!(fam.max_star_height(), 1);
        for n in 0..10 {
            assert_eq!(eval_family(&fam, n).unwrap(), unary(&g, n));
        }
    }

    #[test]
    fn constant_family_is_all_literals() {
        let g = Alphabet::new(["a"]).unwrap();
        let out = Alphabet::new(["x", "y"]).unwrap();
        let t = machines::const_sst(&g, &Word::parse(&out, "x y").unwrap());
        let fam = extract_pumping_family(&t).unwrap();
        assert_eq!(fam.max_star_height(), 0);
        assert_eq!(eval_family(&fam, 5).unwrap().to_string(), "x y");
    }

    #[test]
    fn prefixes_machine_is_refused() {
        // The prefixes machine copies a register, and its unary restriction
        // aⁿ ↦ a̲aⁿ⁻¹a̲aⁿ⁻²… grows quadratically, which no star-height-1
        // family can realize. Extraction must refuse rather than emit a
        // family that fails its self-check.
        let g = Alphabet::new(["a"]).unwrap();
        let t = machines::prefixes_sst(&g);
        assert!(matches!(
            extract_pumping_family(&t),
            Err(Error::Inapplicable(_))
        ));
    }

    #[test]
    fn reverse_family_matches_brute_force() {
        let g = Alphabet::new(["a"]).unwrap();
        let t = machines::reverse_sst(&g);
        let fam = extract_pumping_family(&t).unwrap();
        assert!(fam.max_star_height() <= 1);
        for n in 0..=8 {
            assert_eq!(
                eval_family(&fam, n).unwrap(),
                run_sst(&t, &unary(&g, n)).unwrap(),
                "n={n}"
            );
        }
    }

    #[test]
    fn cfsquaring_family_has_star_height_two() {
        let g = Alphabet::new(["a"]).unwrap();
        let e = build_cfsquaring(&g);
        let fam = extract_cfp_family(&e).unwrap();
        assert_eq!(fam.max_star_height(), 2);
        for n in 0..=6 {
            assert_eq!(
                eval_family(&fam, n).unwrap(),
                eval_cfp(&e, &unary(&g, n)).unwrap(),
                "n={n}"
            );
        }
    }

    #[test]
    fn beta_block_lengths() {
        let g = Alphabet::new(["a", "b"]).unwrap();
        let beta = |s: &str| beta_blocks(&Word::parse(&g, s).unwrap(), "a").unwrap();
        assert_eq!(beta("b a a b"), BTreeSet::from([0, 2]));
        assert_eq!(beta(""), BTreeSet::from([0]));
        assert_eq!(beta("a a"), BTreeSet::from([2]));
        assert_eq!(beta("b b"), BTreeSet::from([0]));
        // no empty maximal factor here: the only letter boundary sits
        // between an "a" run on each side
        assert_eq!(beta("a b a a a"), BTreeSet::from([1, 3]));
    }

    #[test]
    fn uniform_sets_match_the_recursion() {
        let g = Alphabet::new(["a", "b"]).unwrap();
        let a = poly_uniform_sets(&PolyWordExpr::star(lit(&g, "a")), "a").unwrap();
        let expect = PolySet(BTreeSet::from([
            Poly::zero(),
            Poly::constant_nat(1),
            Poly::x(),
        ]));
        assert_eq!(a, expect);
        let b = poly_uniform_sets(&lit(&g, "b"), "a").unwrap();
        assert_eq!(b, PolySet(BTreeSet::from([Poly::zero()])));
    }

    #[test]
    fn uniform_sets_cover_blocks() {
        let g = Alphabet::new(["a", "b"]).unwrap();
        // the starred body both starts and ends with `a`, so seams merge
        let exprs = [
            PolyWordExpr::star(lit(&g, "a b a")),
            PolyWordExpr::cat(lit(&g, "a"), PolyWordExpr::star(lit(&g, "a b"))),
            PolyWordExpr::star(PolyWordExpr::star(lit(&g, "a"))),
            PolyWordExpr::star(PolyWordExpr::cat(
                lit(&g, "b"),
                PolyWordExpr::star(lit(&g, "a")),
            )),
        ];
        for e in &exprs {
            let sets = poly_uniform_sets(e, "a").unwrap();
            assert!(sets.0.contains(&Poly::zero()));
            for n in 0..=10 {
                let blocks = beta_blocks(&eval_pwe(e, n), "a").unwrap();
                assert!(sets.covers(n, &blocks), "n={n} blocks={blocks:?}");
            }
        }
    }

    #[test]
    fn family_sets_cover_all_indices() {
        let g = Alphabet::new(["a"]).unwrap();
        let e = build_cfsquaring(&g);
        let fam = extract_cfp_family(&e).unwrap();
        for sym in fam.alphabet.symbol_vec() {
            let sets = family_uniform_sets(&fam, &sym).unwrap();
            for n in 0..=10 {
                let blocks = beta_blocks(&eval_family(&fam, n).unwrap(), &sym).unwrap();
                assert!(sets.covers(n, &blocks), "c={sym} n={n}");
            }
        }
    }

    #[test]
    fn poly_arithmetic() {
        let p = Poly::new(vec![Rational64::new(1, 2), Rational64::from_integer(2)]);
        assert_eq!(p.eval(3), Rational64::new(13, 2));
        let q = p.compose(&Poly::new(vec![Rational64::from_integer(-1), Rational64::from_integer(1)]));
        assert_eq!(q.eval(4), p.eval(3));
        assert_eq!(Poly::x().mul(&Poly::x()).to_string(), "X^2");
        assert_eq!(Poly::zero().mul(&Poly::x()), Poly::zero());
        assert_eq!(format!("{}", Poly::new(vec![Rational64::new(1, 3)])), "1/3");
    }
}
