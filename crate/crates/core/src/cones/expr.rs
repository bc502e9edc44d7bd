//! Symbolic cone expressions and their duals.
//!
//! Text grammar:
//!
//! ```text
//! expr := "P" | "SP" | "CP" | "Pk(" int ")" | "SPk(" int ")"
//!       | "t(" expr ")" | "meet(" expr "," expr ")" | "join(" expr "," expr ")"
//!       | "dual(" expr ")"
//! ```
//!
//! `t(C)` is the cone `C∘t = {Φ∘t : Φ ∈ C}`, `meet` is intersection and
//! `join` is the convex hull of the union.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::superop::MapDims;

/// The typical base cones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseCone {
    /// `k`-positive maps; `P = P_1`.
    Positive(usize),
    /// `k`-superpositive maps; `SP = SP_1`.
    SuperPositive(usize),
    CompletelyPositive,
}

impl BaseCone {
    pub fn dual(self) -> Self {
        match self {
            BaseCone::Positive(k) => BaseCone::SuperPositive(k),
            BaseCone::SuperPositive(k) => BaseCone::Positive(k),
            BaseCone::CompletelyPositive => BaseCone::CompletelyPositive,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConeExpr {
    Base(BaseCone),
    /// `C∘t`.
    Transposed(Box<ConeExpr>),
    /// `C₁ ∩ C₂`.
    Meet(Box<ConeExpr>, Box<ConeExpr>),
    /// `C₁ ∨ C₂`, the convex hull of the union.
    Join(Box<ConeExpr>, Box<ConeExpr>),
    Dual(Box<ConeExpr>),
}

impl ConeExpr {
    pub fn positive() -> Self {
        Self::Base(BaseCone::Positive(1))
    }

    pub fn superpositive() -> Self {
        Self::Base(BaseCone::SuperPositive(1))
    }

    pub fn cp() -> Self {
        Self::Base(BaseCone::CompletelyPositive)
    }

    pub fn k_positive(k: usize) -> Self {
        Self::Base(BaseCone::Positive(k))
    }

    pub fn k_superpositive(k: usize) -> Self {
        Self::Base(BaseCone::SuperPositive(k))
    }

    pub fn transposed(c: ConeExpr) -> Self {
        Self::Transposed(Box::new(c))
    }

    pub fn meet(a: ConeExpr, b: ConeExpr) -> Self {
        Self::Meet(Box::new(a), Box::new(b))
    }

    pub fn join(a: ConeExpr, b: ConeExpr) -> Self {
        Self::Join(Box::new(a), Box::new(b))
    }

    pub fn dual(c: ConeExpr) -> Self {
        Self::Dual(Box::new(c))
    }

    /// Leaves have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            ConeExpr::Base(_) => 1,
            ConeExpr::Transposed(c) | ConeExpr::Dual(c) => 1 + c.depth(),
            ConeExpr::Meet(a, b) | ConeExpr::Join(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn contains_dual(&self) -> bool {
        match self {
            ConeExpr::Base(_) => false,
            ConeExpr::Dual(_) => true,
            ConeExpr::Transposed(c) => c.contains_dual(),
            ConeExpr::Meet(a, b) | ConeExpr::Join(a, b) => a.contains_dual() || b.contains_dual(),
        }
    }

    /// Canonical form: `Dual` nodes pushed through and eliminated, `t(t(C))`
    /// collapsed, and, when `dims` is given, `P_k`/`SP_k` with
    /// `k ≥ min(m, n)` replaced by `CP`. Rejects `k = 0`.
    pub fn normalize(&self, dims: Option<MapDims>) -> Result<ConeExpr> {
        self.rewrite(false, dims)
    }

    fn rewrite(&self, dualize: bool, dims: Option<MapDims>) -> Result<ConeExpr> {
        Ok(match self {
            ConeExpr::Base(base) => {
                let base = match *base {
                    BaseCone::Positive(0) | BaseCone::SuperPositive(0) => {
                        return Err(Error::Grammar("cone index k must be at least 1".into()))
                    }
                    BaseCone::Positive(k) | BaseCone::SuperPositive(k) if dims.is_some_and(|d| k >= d.min()) => {
                        BaseCone::CompletelyPositive
                    }
                    other => other,
                };
                ConeExpr::Base(if dualize { base.dual() } else { base })
            }
            ConeExpr::Transposed(c) => match c.rewrite(dualize, dims)? {
                ConeExpr::Transposed(inner) => *inner,
                other => ConeExpr::transposed(other),
            },
            ConeExpr::Meet(a, b) => {
                let (a, b) = (a.rewrite(dualize, dims)?, b.rewrite(dualize, dims)?);
                if dualize {
                    ConeExpr::join(a, b)
                } else {
                    ConeExpr::meet(a, b)
                }
            }
            ConeExpr::Join(a, b) => {
                let (a, b) = (a.rewrite(dualize, dims)?, b.rewrite(dualize, dims)?);
                if dualize {
                    ConeExpr::meet(a, b)
                } else {
                    ConeExpr::join(a, b)
                }
            }
            ConeExpr::Dual(c) => c.rewrite(!dualize, dims)?,
        })
    }
}

/// Dual cone expression, with no `Dual` nodes in the output:
/// `P_k ↔ SP_k`, `CP ↔ CP`, `(C∘t)° = C°∘t`, and intersections and hulls
/// swap.
pub fn dual_expr(c: &ConeExpr) -> Result<ConeExpr> {
    c.rewrite(true, None)
}

impl fmt::Display for ConeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeExpr::Base(BaseCone::Positive(1)) => write!(f, "P"),
            ConeExpr::Base(BaseCone::SuperPositive(1)) => write!(f, "SP"),
            ConeExpr::Base(BaseCone::CompletelyPositive) => write!(f, "CP"),
            ConeExpr::Base(BaseCone::Positive(k)) => write!(f, "Pk({k})"),
            ConeExpr::Base(BaseCone::SuperPositive(k)) => write!(f, "SPk({k})"),
            ConeExpr::Transposed(c) => write!(f, "t({c})"),
            ConeExpr::Meet(a, b) => write!(f, "meet({a},{b})"),
            ConeExpr::Join(a, b) => write!(f, "join({a},{b})"),
            ConeExpr::Dual(c) => write!(f, "dual({c})"),
        }
    }
}

impl FromStr for ConeExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parser = Parser { src: s.as_bytes(), pos: 0 };
        let expr = parser.expr()?;
        parser.skip_ws();
        if parser.pos != parser.src.len() {
            return Err(parser.error("trailing input"));
        }
        Ok(expr)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Grammar(format!("{what} at offset {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, byte: u8) -> Result<()> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", byte as char)))
        }
    }

    fn ident(&mut self) -> Result<&str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a cone name"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ASCII"))
    }

    fn int(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ASCII")
            .parse()
            .map_err(|_| self.error("expected an integer"))
    }

    fn expr(&mut self) -> Result<ConeExpr> {
        let name = self.ident()?.to_owned();
        let expr = match name.as_str() {
            "P" => ConeExpr::positive(),
            "SP" => ConeExpr::superpositive(),
            "CP" => ConeExpr::cp(),
            "Pk" | "SPk" => {
                self.expect(b'(')?;
                let k = self.int()?;
                self.expect(b')')?;
                if name == "Pk" {
                    ConeExpr::k_positive(k)
                } else {
                    ConeExpr::k_superpositive(k)
                }
            }
            "t" | "dual" => {
                self.expect(b'(')?;
                let inner = self.expr()?;
                self.expect(b')')?;
                if name == "t" {
                    ConeExpr::transposed(inner)
                } else {
                    ConeExpr::dual(inner)
                }
            }
            "meet" | "join" => {
                self.expect(b'(')?;
                let a = self.expr()?;
                self.expect(b',')?;
                let b = self.expr()?;
                self.expect(b')')?;
                if name == "meet" {
                    ConeExpr::meet(a, b)
                } else {
                    ConeExpr::join(a, b)
                }
            }
            other => return Err(Error::Grammar(format!("unknown cone '{other}'"))),
        };
        Ok(expr)
    }
}
