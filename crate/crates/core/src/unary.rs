//! Normal form of one-letter unary words in epigroups.
//!
//! Inside an epigroup, every one-letter unary word in `x` evaluates either to
//! a plain power `x^k` or to an element of the maximal subgroup around
//! `x^ω`. That subgroup contains `g = x x^ω` with `x̄ = g^{-1}`, and every
//! group-valued word equals `g^e` for an integer `e`. The rules, applied
//! bottom-up:
//!
//! - `x^a · x^b → x^{a+b}`
//! - `x^a · g^e → g^{a+e}` and `g^e · x^a → g^{e+a}` (since `x x^ω = x^ω x = g`)
//! - `g^e · g^f → g^{e+f}`
//! - `bar(x^k) → g^{-k}` and `bar(g^e) → g^{-e}`
//!
//! A final `g^e` is reported as `x^p x̄^q` with `q >= 1`: `(0, -e)` when
//! `e < 0`, and `(e + 1, 1)` otherwise (so `x x̄ = x^ω = g^0` is `(1, 1)` and
//! `bar(bar(x)) = g` is `(2, 1)`).

use alloc::vec;

use crate::words::{Item, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum UnaryError {
    #[error("word contains no pseudoinverse")]
    NotUnary,
    #[error("word depends on more than one letter")]
    MultiLetter,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Value {
    Power(u64),
    Group(i64),
}

impl Value {
    fn mul(self, other: Value) -> Value {
        match (self, other) {
            (Value::Power(a), Value::Power(b)) => Value::Power(a + b),
            (Value::Power(a), Value::Group(e)) | (Value::Group(e), Value::Power(a)) => {
                Value::Group(e + a as i64)
            }
            (Value::Group(e), Value::Group(f)) => Value::Group(e + f),
        }
    }

    fn bar(self) -> Value {
        match self {
            Value::Power(k) => Value::Group(-(k as i64)),
            Value::Group(e) => Value::Group(-e),
        }
    }
}

fn eval(w: &Word) -> Value {
    w.items()
        .iter()
        .map(|item| match item {
            Item::Letter(_) => Value::Power(1),
            Item::Bar(inner) => eval(inner).bar(),
        })
        .reduce(Value::mul)
        .expect("words are nonempty")
}

/// `(p, q)` with `q >= 1` such that every epigroup satisfies `w ≈ x^p x̄^q`.
pub fn normalize_single_letter_unary(w: &Word) -> Result<(usize, usize), UnaryError> {
    if w.content().len() > 1 {
        return Err(UnaryError::MultiLetter);
    }
    match eval(w) {
        Value::Power(_) => Err(UnaryError::NotUnary),
        Value::Group(e) if e < 0 => Ok((0, (-e) as usize)),
        Value::Group(e) => Ok((e as usize + 1, 1)),
    }
}

/// The word `x^p x̄^q`.
pub fn normal_word(letter: &Letter, p: usize, q: usize) -> Word {
    let x = Word::letter(letter.clone());
    let mut items = vec![];
    for _ in 0..p {
        items.extend(x.items().iter().cloned());
    }
    for _ in 0..q {
        items.push(Item::Bar(x.clone()));
    }
    Word::from_items(items).expect("q >= 1")
}
