//! The PCP text format.
//!
//! ```text
//! # comment
//! pcgroup <d>
//! order <k> <m>          # one per generator, m a power of 2
//! power <k> := <word>    # g_k^{m_k} = word, omitted = identity
//! conj <j> <k> := <word> # g_j^{g_k} = word (j > k), omitted = trivial
//! ```
//!
//! A `<word>` is whitespace-separated `g<i>` or `g<i>^<int>` tokens, or the
//! literal `1` for the empty word. Canonical serialization lists orders
//! ascending by k, power lines ascending by k omitting identity right-hand
//! sides, conj lines ascending by (k, j) omitting trivial ones, and reduces
//! every exponent into [1, m_i - 1].

use std::fmt::Write as _;

use crate::error::{Error, ParseError, Result};

use super::presentation::PcPresentation;
use super::word::Word;

pub fn parse_pcp(text: &str) -> Result<PcPresentation> {
    let err = |line: usize, col: usize, msg: String| -> Error {
        ParseError { line, col, msg }.into()
    };

    let mut d: Option<usize> = None;
    let mut orders: Vec<Option<u64>> = Vec::new();
    let mut powers: Vec<Option<(usize, Word)>> = Vec::new();
    let mut conjs: Vec<(usize, usize, Word)> = Vec::new();
    let mut seen_conj: Vec<(usize, usize)> = Vec::new();

    for (lineno, raw_line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = match raw_line.find('#') {
            Some(p) => &raw_line[..p],
            None => raw_line,
        };
        if line.trim().is_empty() {
            continue;
        }
        let mut toks = tokenize(line, lineno);
        let (kw, kw_col) = toks.next().expect("nonempty line has a token");
        match kw {
            "pcgroup" => {
                if d.is_some() {
                    return Err(err(lineno, kw_col, "duplicate pcgroup line".into()));
                }
                let n: usize = toks.expect_int(lineno, "generator count")?;
                toks.expect_end(lineno)?;
                d = Some(n);
                orders = vec![None; n];
                powers = vec![None; n];
            }
            "order" => {
                let n = d.ok_or_else(|| err(lineno, kw_col, "order before pcgroup".into()))?;
                let (k, kcol) = toks.expect_gen_index(lineno, n)?;
                let (m, mcol): (u64, usize) = toks.expect_int_at(lineno, "relative order")?;
                toks.expect_end(lineno)?;
                if !(m >= 2 && m.is_power_of_two()) {
                    return Err(err(lineno, mcol, format!("relative order {m} is not a power of 2 >= 2")));
                }
                if orders[k].is_some() {
                    return Err(err(lineno, kcol, format!("duplicate order line for g{}", k + 1)));
                }
                orders[k] = Some(m);
            }
            "power" => {
                let n = d.ok_or_else(|| err(lineno, kw_col, "power before pcgroup".into()))?;
                let (k, kcol) = toks.expect_gen_index(lineno, n)?;
                toks.expect_assign(lineno)?;
                let w = toks.expect_word(lineno, n)?;
                for l in w.letters() {
                    if l.gen <= k {
                        return Err(err(
                            lineno,
                            kcol,
                            format!("power rhs for g{} references g{} (index not > {})", k + 1, l.gen + 1, k + 1),
                        ));
                    }
                }
                if powers[k].is_some() {
                    return Err(err(lineno, kcol, format!("duplicate power line for g{}", k + 1)));
                }
                powers[k] = Some((k, w));
            }
            "conj" => {
                let n = d.ok_or_else(|| err(lineno, kw_col, "conj before pcgroup".into()))?;
                let (j, jcol) = toks.expect_gen_index(lineno, n)?;
                let (k, _kcol) = toks.expect_gen_index(lineno, n)?;
                toks.expect_assign(lineno)?;
                let w = toks.expect_word(lineno, n)?;
                if j <= k {
                    return Err(err(lineno, jcol, format!("conj {} {} needs j > k", j + 1, k + 1)));
                }
                for l in w.letters() {
                    if l.gen <= k {
                        return Err(err(
                            lineno,
                            jcol,
                            format!("conj rhs references g{} (index not > {})", l.gen + 1, k + 1),
                        ));
                    }
                }
                if seen_conj.contains(&(j, k)) {
                    return Err(err(lineno, jcol, format!("duplicate conj line for g{}^g{}", j + 1, k + 1)));
                }
                seen_conj.push((j, k));
                conjs.push((j, k, w));
            }
            other => {
                return Err(err(lineno, kw_col, format!("unknown keyword `{other}`")));
            }
        }
    }

    let Some(n) = d else {
        return Err(err(1, 1, "missing pcgroup line".into()));
    };
    let mut rel_orders = Vec::with_capacity(n);
    for (k, m) in orders.into_iter().enumerate() {
        match m {
            Some(m) => rel_orders.push(m),
            None => return Err(err(1, 1, format!("missing order line for g{}", k + 1))),
        }
    }
    let power_words = powers
        .into_iter()
        .map(|p| p.map(|(_, w)| w).unwrap_or_default())
        .collect();
    PcPresentation::from_parts(rel_orders, power_words, conjs)
}

/// Canonical, byte-stable serialization.
pub fn serialize_pcp(p: &PcPresentation) -> String {
    let d = p.num_generators();
    let mut out = String::new();
    let _ = writeln!(out, "pcgroup {d}");
    for k in 0..d {
        let _ = writeln!(out, "order {} {}", k + 1, p.rel_order(k));
    }
    for k in 0..d {
        let w = p.power_rhs(k);
        if !w.is_empty() {
            let _ = writeln!(out, "power {} := {}", k + 1, w);
        }
    }
    // Ascending by (k, j): conjugating generator first.
    for k in 0..d {
        for j in (k + 1)..d {
            if let Some(w) = p.conj_rhs(j, k) {
                let _ = writeln!(out, "conj {} {} := {}", j + 1, k + 1, w);
            }
        }
    }
    out
}

impl PcPresentation {
    pub fn to_text(&self) -> String {
        serialize_pcp(self)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        parse_pcp(text)
    }
}

struct Tokens<'a> {
    toks: std::vec::IntoIter<(&'a str, usize)>,
}

fn tokenize(line: &str, _lineno: usize) -> Tokens<'_> {
    let mut toks = Vec::new();
    let mut col = 1usize;
    for part in line.split(' ') {
        let trimmed = part.trim();
        if !trimmed.is_empty() {
            // column of the token start, 1-based
            let offset = part.len() - part.trim_start().len();
            toks.push((trimmed, col + offset));
        }
        col += part.len() + 1;
    }
    Tokens {
        toks: toks.into_iter(),
    }
}

impl<'a> Tokens<'a> {
    fn next(&mut self) -> Option<(&'a str, usize)> {
        self.toks.next()
    }

    fn expect_int<T: std::str::FromStr>(&mut self, line: usize, what: &str) -> Result<T> {
        self.expect_int_at(line, what).map(|(v, _)| v)
    }

    fn expect_int_at<T: std::str::FromStr>(&mut self, line: usize, what: &str) -> Result<(T, usize)> {
        match self.next() {
            Some((t, col)) => t.parse::<T>().map(|v| (v, col)).map_err(|_| {
                ParseError {
                    line,
                    col,
                    msg: format!("expected {what}, found `{t}`"),
                }
                .into()
            }),
            None => Err(ParseError {
                line,
                col: 0,
                msg: format!("missing {what}"),
            }
            .into()),
        }
    }

    /// 1-based generator number in the text, returned 0-based.
    fn expect_gen_index(&mut self, line: usize, d: usize) -> Result<(usize, usize)> {
        let (v, col): (usize, usize) = self.expect_int_at(line, "generator index")?;
        if v == 0 || v > d {
            return Err(ParseError {
                line,
                col,
                msg: format!("generator index {v} out of range 1..={d}"),
            }
            .into());
        }
        Ok((v - 1, col))
    }

    fn expect_assign(&mut self, line: usize) -> Result<()> {
        match self.next() {
            Some((":=", _)) => Ok(()),
            Some((t, col)) => Err(ParseError {
                line,
                col,
                msg: format!("expected `:=`, found `{t}`"),
            }
            .into()),
            None => Err(ParseError {
                line,
                col: 0,
                msg: "expected `:=`".into(),
            }
            .into()),
        }
    }

    fn expect_word(&mut self, line: usize, d: usize) -> Result<Word> {
        let mut w = Word::identity();
        let mut any = false;
        let mut identity_token = false;
        while let Some((t, col)) = self.next() {
            any = true;
            if t == "1" {
                identity_token = true;
                continue;
            }
            let rest = t.strip_prefix('g').ok_or_else(|| ParseError {
                line,
                col,
                msg: format!("expected word token `g<i>` or `g<i>^<int>`, found `{t}`"),
            })?;
            let (gen_s, exp_s) = match rest.split_once('^') {
                Some((g, e)) => (g, Some(e)),
                None => (rest, None),
            };
            let gen: usize = gen_s.parse().map_err(|_| ParseError {
                line,
                col,
                msg: format!("bad generator number in `{t}`"),
            })?;
            if gen == 0 || gen > d {
                return Err(ParseError {
                    line,
                    col,
                    msg: format!("generator index {gen} out of range 1..={d}"),
                }
                .into());
            }
            let exp: i64 = match exp_s {
                Some(e) => e.parse().map_err(|_| ParseError {
                    line,
                    col,
                    msg: format!("bad exponent in `{t}`"),
                })?,
                None => 1,
            };
            w.push(gen - 1, exp);
        }
        if !any {
            return Err(ParseError {
                line,
                col: 0,
                msg: "missing word".into(),
            }
            .into());
        }
        if identity_token && !w.is_empty() {
            return Err(ParseError {
                line,
                col: 0,
                msg: "`1` cannot be mixed with generator tokens".into(),
            }
            .into());
        }
        Ok(w)
    }

    fn expect_end(&mut self, line: usize) -> Result<()> {
        match self.next() {
            None => Ok(()),
            Some((t, col)) => Err(ParseError {
                line,
                col,
                msg: format!("unexpected trailing token `{t}`"),
            }
            .into()),
        }
    }
}
