//! Lattice expressions such as `U(2)+E8(2)+~A1^12` or `U+D4^5`.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr    := summand ('+' summand)*
//! summand := '~A1^' N twist?          N divisible by 4
//!          | atom twist? ('^' k)?
//! atom    := 'U' | 'A' n | 'D' n | 'E6' | 'E7' | 'E8'
//! twist   := '(' m ')'
//! ```
//!
//! `~A1^N` is the index-2 overlattice of `A1^N` obtained by adjoining
//! `delta = (e_1 + ... + e_N)/2`. It is built on the basis
//! `e_1, ..., e_{N-1}, delta`.

use std::fmt;

use num_bigint::BigInt;

use super::matrix::IntMatrix;
use super::{IntegerLattice, LatticeError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Atom {
    U,
    A(u32),
    D(u32),
    E(u32),
    /// `~A1^N`
    GluedA1(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub atom: Atom,
    pub twist: u32,
    pub power: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeExpr {
    pub summands: Vec<Summand>,
}

/// One orthogonal block of an elaborated lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub atom: Atom,
    pub twist: u32,
    pub start: usize,
    pub rank: usize,
}

#[derive(Clone, Debug)]
pub struct Elaborated {
    pub expr: LatticeExpr,
    pub lattice: IntegerLattice,
    pub blocks: Vec<Block>,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::U => write!(f, "U"),
            Atom::A(n) => write!(f, "A{n}"),
            Atom::D(n) => write!(f, "D{n}"),
            Atom::E(n) => write!(f, "E{n}"),
            Atom::GluedA1(n) => write!(f, "~A1^{n}"),
        }
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.atom)?;
        if self.twist != 1 {
            write!(f, "({})", self.twist)?;
        }
        if self.power != 1 {
            write!(f, "^{}", self.power)?;
        }
        Ok(())
    }
}

impl fmt::Display for LatticeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.summands.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, msg: &str) -> LatticeError {
        LatticeError::Parse(format!("{msg} at position {}", self.pos))
    }

    fn number(&mut self) -> Result<u32, LatticeError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("number out of range"))
    }

    fn twist(&mut self) -> Result<u32, LatticeError> {
        if !self.eat(b'(') {
            return Ok(1);
        }
        let m = self.number()?;
        if m == 0 {
            return Err(self.err("twist must be positive"));
        }
        if !self.eat(b')') {
            return Err(self.err("expected ')'"));
        }
        Ok(m)
    }

    fn summand(&mut self) -> Result<Summand, LatticeError> {
        if self.eat(b'~') {
            if !(self.eat(b'A') && self.eat(b'1') && self.eat(b'^')) {
                return Err(self.err("expected '~A1^N'"));
            }
            let n = self.number()?;
            if n == 0 || n % 4 != 0 {
                return Err(LatticeError::GlueExponent(n));
            }
            let twist = self.twist()?;
            return Ok(Summand {
                atom: Atom::GluedA1(n),
                twist,
                power: 1,
            });
        }
        let atom = match self.peek() {
            Some(b'U') => {
                self.pos += 1;
                Atom::U
            }
            Some(c @ (b'A' | b'D' | b'E')) => {
                self.pos += 1;
                let n = self.number()?;
                match c {
                    b'A' if n >= 1 => Atom::A(n),
                    b'D' if n >= 4 => Atom::D(n),
                    b'E' if (6..=8).contains(&n) => Atom::E(n),
                    _ => {
                        return Err(LatticeError::Parse(format!(
                            "no root lattice {}{n}",
                            c as char
                        )))
                    }
                }
            }
            _ => return Err(self.err("expected U, A<n>, D<n>, E6, E7, E8 or ~A1^N")),
        };
        let twist = self.twist()?;
        let power = if self.eat(b'^') { self.number()? } else { 1 };
        if power == 0 {
            return Err(self.err("power must be positive"));
        }
        Ok(Summand { atom, twist, power })
    }
}

pub fn parse_expr(text: &str) -> Result<LatticeExpr, LatticeError> {
    let cleaned: Vec<u8> = text.bytes().filter(|c| !c.is_ascii_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(LatticeError::Parse("empty expression".into()));
    }
    let mut p = Parser {
        s: &cleaned,
        pos: 0,
    };
    let mut summands = vec![p.summand()?];
    while p.eat(b'+') {
        summands.push(p.summand()?);
    }
    if p.pos != cleaned.len() {
        return Err(p.err("unexpected character"));
    }
    Ok(LatticeExpr { summands })
}

fn root_gram(atom: Atom) -> Vec<Vec<i64>> {
    let chain = |n: usize| {
        let mut g = vec![vec![0i64; n]; n];
        for i in 0..n {
            g[i][i] = -2;
            if i + 1 < n {
                g[i][i + 1] = 1;
                g[i + 1][i] = 1;
            }
        }
        g
    };
    match atom {
        Atom::U => vec![vec![0, 1], vec![1, 0]],
        Atom::A(n) => chain(n as usize),
        Atom::D(n) => {
            let n = n as usize;
            let mut g = chain(n);
            // last node hangs off the third-from-last
            g[n - 1][n - 2] = 0;
            g[n - 2][n - 1] = 0;
            g[n - 1][n - 3] = 1;
            g[n - 3][n - 1] = 1;
            g
        }
        Atom::E(n) => {
            let n = n as usize;
            let mut g = chain(n);
            g[n - 1][n - 2] = 0;
            g[n - 2][n - 1] = 0;
            g[n - 1][2] = 1;
            g[2][n - 1] = 1;
            g
        }
        Atom::GluedA1(big_n) => {
            let n = big_n as usize;
            let mut g = vec![vec![0i64; n]; n];
            for i in 0..n - 1 {
                g[i][i] = -2;
                g[i][n - 1] = -1;
                g[n - 1][i] = -1;
            }
            g[n - 1][n - 1] = -(big_n as i64) / 2;
            g
        }
    }
}

impl LatticeExpr {
    pub fn rank(&self) -> usize {
        self.summands
            .iter()
            .map(|s| {
                let r = match s.atom {
                    Atom::U => 2,
                    Atom::A(n) | Atom::D(n) | Atom::E(n) | Atom::GluedA1(n) => n as usize,
                };
                r * s.power as usize
            })
            .sum()
    }

    pub fn elaborate(&self) -> Result<Elaborated, LatticeError> {
        let n = self.rank();
        let mut g = IntMatrix::zeros(n, n);
        let mut blocks = Vec::new();
        let mut start = 0;
        for s in &self.summands {
            let block = root_gram(s.atom);
            let r = block.len();
            for _ in 0..s.power {
                for i in 0..r {
                    for j in 0..r {
                        g[(start + i, start + j)] = BigInt::from(block[i][j] * s.twist as i64);
                    }
                }
                blocks.push(Block {
                    atom: s.atom,
                    twist: s.twist,
                    start,
                    rank: r,
                });
                start += r;
            }
        }
        let lattice = IntegerLattice::new(g)?.with_label(self.to_string());
        Ok(Elaborated {
            expr: self.clone(),
            lattice,
            blocks,
        })
    }
}

pub fn build_lattice(text: &str) -> Result<Elaborated, LatticeError> {
    parse_expr(text)?.elaborate()
}

impl Elaborated {
    /// Coordinates of the orthogonal roots `e_1, ..., e_N` of a `~A1^N`
    /// block; `e_N = 2 delta - e_1 - ... - e_{N-1}`.
    pub fn glued_roots(&self, block: usize) -> Option<Vec<Vec<BigInt>>> {
        let b = &self.blocks[block];
        let Atom::GluedA1(big_n) = b.atom else {
            return None;
        };
        let n = big_n as usize;
        let dim = self.lattice.rank();
        let mut roots = Vec::with_capacity(n);
        for i in 0..n - 1 {
            let mut v = vec![BigInt::from(0); dim];
            v[b.start + i] = 1.into();
            roots.push(v);
        }
        let mut last = vec![BigInt::from(0); dim];
        for i in 0..n - 1 {
            last[b.start + i] = (-1).into();
        }
        last[b.start + n - 1] = 2.into();
        roots.push(last);
        Some(roots)
    }

    /// Coordinates of `delta` in a `~A1^N` block.
    pub fn glue_vector(&self, block: usize) -> Option<Vec<BigInt>> {
        let b = &self.blocks[block];
        let Atom::GluedA1(n) = b.atom else {
            return None;
        };
        let mut v = vec![BigInt::from(0); self.lattice.rank()];
        v[b.start + n as usize - 1] = 1.into();
        Some(v)
    }
}
