//! Monomial and module term orders.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exactalg::{Mono, RingRef, MAX_VARS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    /// Degree (auxiliary weight) then reverse lexicographic.
    DegRevLex,
    Lex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModuleOrder {
    /// Position over term; a smaller position index is larger.
    Pot,
    /// Term (with degree shift) over position.
    Top,
}

/// A term order on free modules over a polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    /// Variables listed here rank first (largest), in order; the rest follow
    /// in ring order.
    #[serde(default)]
    pub priority: Vec<String>,
    #[serde(default = "default_module")]
    pub module: ModuleOrder,
}

fn default_module() -> ModuleOrder {
    ModuleOrder::Pot
}

impl Default for MonomialOrder {
    fn default() -> Self {
        MonomialOrder {
            kind: OrderKind::DegRevLex,
            priority: Vec::new(),
            module: ModuleOrder::Pot,
        }
    }
}

impl MonomialOrder {
    pub fn degrevlex() -> Self {
        Self::default()
    }

    pub fn lex() -> Self {
        MonomialOrder {
            kind: OrderKind::Lex,
            ..Self::default()
        }
    }

    pub fn top(mut self) -> Self {
        self.module = ModuleOrder::Top;
        self
    }

    pub fn with_priority(mut self, vars: &[&str]) -> Self {
        self.priority = vars.iter().map(|s| s.to_string()).collect();
        self
    }
}

/// Resolved order: internal variable k is ring variable `perm[k]`.
#[derive(Clone, Debug)]
pub(crate) struct Ctx {
    pub kind: OrderKind,
    pub module: ModuleOrder,
    pub perm: Vec<usize>,
    pub weights: [i64; MAX_VARS],
    pub shifts: Vec<i64>,
}

impl Ctx {
    pub fn new(ring: &RingRef, ord: &MonomialOrder, shifts: Vec<i64>) -> Result<Ctx> {
        let n = ring.nvars();
        let mut perm = Vec::with_capacity(n);
        for name in &ord.priority {
            let i = ring.grading.var_index(name)?;
            if !perm.contains(&i) {
                perm.push(i);
            }
        }
        for i in 0..n {
            if !perm.contains(&i) {
                perm.push(i);
            }
        }
        let mut weights = [0i64; MAX_VARS];
        for (k, &i) in perm.iter().enumerate() {
            weights[k] = ring.grading.vars[i].weight;
        }
        Ok(Ctx {
            kind: ord.kind,
            module: ord.module,
            perm,
            weights,
            shifts,
        })
    }

    /// Ring exponents to internal exponents.
    pub fn to_internal(&self, m: &Mono) -> Mono {
        let mut out = Mono::one();
        for (k, &i) in self.perm.iter().enumerate() {
            out.0[k] = m.0[i];
        }
        out
    }

    pub fn to_external(&self, m: &Mono) -> Mono {
        let mut out = Mono::one();
        for (k, &i) in self.perm.iter().enumerate() {
            out.0[i] = m.0[k];
        }
        out
    }

    pub fn wdeg(&self, m: &Mono) -> i64 {
        m.0.iter()
            .zip(self.weights.iter())
            .map(|(&e, &w)| e as i64 * w)
            .sum()
    }

    pub fn term_deg(&self, pos: u32, m: &Mono) -> i64 {
        self.wdeg(m) + self.shifts.get(pos as usize).copied().unwrap_or(0)
    }

    pub fn cmp_mono(&self, a: &Mono, b: &Mono) -> Ordering {
        match self.kind {
            OrderKind::Lex => a.cmp_lex(b),
            OrderKind::DegRevLex => match self.wdeg(a).cmp(&self.wdeg(b)) {
                Ordering::Equal => {
                    for i in (0..MAX_VARS).rev() {
                        if a.0[i] != b.0[i] {
                            return b.0[i].cmp(&a.0[i]);
                        }
                    }
                    Ordering::Equal
                }
                c => c,
            },
        }
    }

    pub fn cmp_term(&self, pa: u32, a: &Mono, pb: u32, b: &Mono) -> Ordering {
        match self.module {
            ModuleOrder::Pot => pb.cmp(&pa).then_with(|| self.cmp_mono(a, b)),
            ModuleOrder::Top => self
                .term_deg(pa, a)
                .cmp(&self.term_deg(pb, b))
                .then_with(|| self.cmp_mono(a, b))
                .then_with(|| pb.cmp(&pa)),
        }
    }
}
