//! Lazy increasing enumerations of subsets of ℕ.

use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::rational::{ExtRat, Rational};
use crate::set::FinSet;

/// `modulus(k, ε)` = some `N` with `|x_m(k)| < ε` for every `m ≥ N`.
pub type ColumnModulus = Arc<dyn Fn(u64, &Rational) -> u64 + Send + Sync>;

/// `point_value(n)` = `φ{n}`.
pub type PointValue = Arc<dyn Fn(u64) -> ExtRat + Send + Sync>;

/// Raised when the underlying enumeration stops being strictly increasing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderFault {
    pub previous: u64,
    pub offending: u64,
}

/// A single-consumer, strictly increasing enumeration, possibly infinite.
///
/// A non-increasing element ends the stream and is recorded in [`SetStream::fault`].
pub struct SetStream {
    inner: Box<dyn Iterator<Item = u64>>,
    last: Option<u64>,
    consumed: u64,
    fault: Option<OrderFault>,
    point_value: Option<PointValue>,
    modulus: Option<ColumnModulus>,
}

impl fmt::Debug for SetStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SetStream")
            .field("last", &self.last)
            .field("consumed", &self.consumed)
            .field("fault", &self.fault)
            .field("point_value", &self.point_value.is_some())
            .field("modulus", &self.modulus.is_some())
            .finish()
    }
}

impl SetStream {
    pub fn new(iter: impl Iterator<Item = u64> + 'static) -> Self {
        SetStream { inner: Box::new(iter), last: None, consumed: 0, fault: None, point_value: None, modulus: None }
    }

    /// `0, 1, 2, ...`
    pub fn naturals() -> Self {
        SetStream::new(0u64..)
    }

    /// `start, start+1, ...`
    pub fn from(start: u64) -> Self {
        SetStream::new(start..)
    }

    /// The elements of a finite set, then exhaustion.
    pub fn finite(s: &FinSet) -> Self {
        SetStream::new(s.as_slice().to_vec().into_iter())
    }

    /// Naturals satisfying `keep`, in order.
    pub fn filtered(keep: impl Fn(u64) -> bool + 'static) -> Self {
        SetStream::new((0u64..).filter(move |&n| keep(n)))
    }

    pub fn with_point_value(mut self, f: PointValue) -> Self {
        self.point_value = Some(f);
        self
    }

    pub fn with_modulus(mut self, m: ColumnModulus) -> Self {
        self.modulus = Some(m);
        self
    }

    pub fn point_value(&self, n: u64) -> Option<ExtRat> {
        self.point_value.as_ref().map(|f| f(n))
    }

    pub fn has_point_value(&self) -> bool {
        self.point_value.is_some()
    }

    pub fn modulus(&self, k: u64, eps: &Rational) -> Option<u64> {
        self.modulus.as_ref().map(|m| m(k, eps))
    }

    pub fn has_modulus(&self) -> bool {
        self.modulus.is_some()
    }

    pub fn modulus_fn(&self) -> Option<ColumnModulus> {
        self.modulus.clone()
    }

    /// Number of elements delivered so far.
    pub fn consumed(&self) -> u64 {
        self.consumed
    }

    pub fn fault(&self) -> Option<OrderFault> {
        self.fault
    }

    /// Up to `n` further elements.
    pub fn take_prefix(&mut self, n: u64) -> Vec<u64> {
        let mut out = Vec::new();
        while (out.len() as u64) < n {
            match self.next() {
                Some(x) => out.push(x),
                None => break,
            }
        }
        out
    }
}

impl Iterator for SetStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.fault.is_some() {
            return None;
        }
        let x = self.inner.next()?;
        if let Some(prev) = self.last {
            if x <= prev {
                self.fault = Some(OrderFault { previous: prev, offending: x });
                return None;
            }
        }
        self.last = Some(x);
        self.consumed += 1;
        Some(x)
    }
}
