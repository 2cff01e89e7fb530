//! Piecewise-linear Young functions with an explicit tail model.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail {
    /// `A = +inf` beyond the last knot.
    Infinite,
    /// Affine continuation with the given slope.
    Linear(f64),
    /// `y_last · (t / x_last)^p` beyond the last knot.
    Power(f64),
}

/// Knots start at the origin. Values are nondecreasing; convexity is tracked by
/// a flag rather than enforced, since tables may carry flat stretches.
#[derive(Debug, Clone)]
pub struct Sampled {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Exponent of the piece on `[0, xs[1]]`: `y1 (t / x1)^head`.
    head: f64,
    tail: Tail,
    convex: bool,
}

impl Sampled {
    pub fn new(mut xs: Vec<f64>, mut ys: Vec<f64>, tail: Tail) -> Result<Self> {
        if xs.len() != ys.len() || xs.is_empty() {
            return Err(Error::InvalidParameter("knot arrays must be non-empty and equal length".into()));
        }
        if xs[0] > 0.0 {
            xs.insert(0, 0.0);
            ys.insert(0, 0.0);
        }
        if xs[0] != 0.0 || ys[0] != 0.0 {
            return Err(Error::InvalidParameter("first knot must be the origin with value 0".into()));
        }
        for i in 1..xs.len() {
            if !(xs[i] > xs[i - 1]) || !xs[i].is_finite() {
                return Err(Error::NonMonotoneTable(format!("t not strictly increasing at row {i}")));
            }
            if !(ys[i] >= ys[i - 1]) || !ys[i].is_finite() {
                return Err(Error::NonMonotoneTable(format!("values decrease at t = {}", xs[i])));
            }
        }
        match tail {
            Tail::Linear(m) if !(m >= 0.0) => return Err(Error::InvalidParameter("tail slope".into())),
            Tail::Power(p) if !(p >= 1.0) => return Err(Error::InvalidParameter("tail exponent".into())),
            _ => {}
        }
        let mut s = Sampled { xs, ys, head: 1.0, tail, convex: true };
        s.convex = s.check_convex();
        Ok(s)
    }

    /// Replace the linear piece next to the origin by `y1 (t / x1)^p`.
    pub fn with_power_head(mut self, p: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::InvalidParameter("head exponent".into()));
        }
        if self.xs.len() < 2 {
            return Err(Error::InvalidParameter("power head needs a positive knot".into()));
        }
        self.head = p;
        self.convex = self.check_convex();
        Ok(self)
    }

    pub fn head(&self) -> f64 {
        self.head
    }

    fn check_convex(&self) -> bool {
        let n = self.xs.len();
        let mut prev = 0.0f64;
        for i in 1..n {
            let m = if i == 1 { self.slope(0) * self.head } else { self.slope(i - 1) };
            if m < prev * (1.0 - 1e-9) - 1e-300 {
                return false;
            }
            prev = m;
        }
        match self.tail {
            Tail::Linear(m) => m >= prev * (1.0 - 1e-9),
            Tail::Power(p) => self.last_y() == 0.0 || p * self.last_y() / self.last_x() >= prev * (1.0 - 1e-9),
            Tail::Infinite => true,
        }
    }

    fn slope(&self, i: usize) -> f64 {
        (self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i])
    }

    pub fn knots(&self) -> (&[f64], &[f64]) {
        (&self.xs, &self.ys)
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn is_convex(&self) -> bool {
        self.convex
    }

    fn last_x(&self) -> f64 {
        *self.xs.last().unwrap()
    }

    fn last_y(&self) -> f64 {
        *self.ys.last().unwrap()
    }

    pub fn t_inf(&self) -> f64 {
        match self.tail {
            Tail::Infinite => self.last_x(),
            _ => f64::INFINITY,
        }
    }

    pub fn origin_flat(&self) -> f64 {
        let k = self.ys.partition_point(|&y| y <= 0.0);
        if k == self.ys.len() {
            match self.tail {
                Tail::Infinite => self.last_x(),
                Tail::Linear(m) if m == 0.0 => f64::INFINITY,
                _ => self.last_x(),
            }
        } else {
            self.xs[k - 1]
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let xl = self.last_x();
        if t > xl {
            let yl = self.last_y();
            return match self.tail {
                Tail::Infinite => f64::INFINITY,
                Tail::Linear(m) => yl + m * (t - xl),
                Tail::Power(p) => yl * (t / xl).powf(p),
            };
        }
        let k = self.xs.partition_point(|&x| x < t);
        if self.xs[k] == t {
            return self.ys[k];
        }
        let (x0, x1, y0, y1) = (self.xs[k - 1], self.xs[k], self.ys[k - 1], self.ys[k]);
        if k == 1 && self.head != 1.0 {
            return y1 * (t / x1).powf(self.head);
        }
        y0 + (y1 - y0) * ((t - x0) / (x1 - x0))
    }

    /// Exact `sup{t : A(t) <= tau}` for the piecewise-linear model.
    pub fn inverse(&self, tau: f64) -> f64 {
        if tau.is_nan() {
            return f64::NAN;
        }
        if tau == f64::INFINITY {
            return f64::INFINITY;
        }
        let tau = tau.max(0.0);
        let n = self.ys.len();
        let k = self.ys.partition_point(|&y| y <= tau) - 1;
        if k == n - 1 {
            let (xl, yl) = (self.last_x(), self.last_y());
            return match self.tail {
                Tail::Infinite => xl,
                Tail::Linear(m) => {
                    if m > 0.0 {
                        xl + (tau - yl) / m
                    } else {
                        f64::INFINITY
                    }
                }
                Tail::Power(p) => {
                    if yl > 0.0 {
                        xl * (tau / yl).powf(1.0 / p)
                    } else {
                        f64::INFINITY
                    }
                }
            };
        }
        let (x0, x1, y0, y1) = (self.xs[k], self.xs[k + 1], self.ys[k], self.ys[k + 1]);
        if k == 0 && self.head != 1.0 {
            return (x1 * (tau / y1).powf(1.0 / self.head)).min(x1);
        }
        (x0 + (tau - y0) * ((x1 - x0) / (y1 - y0))).min(x1)
    }

    /// Indices of the lower convex hull of the knots.
    fn hull(&self) -> Vec<usize> {
        let mut h: Vec<usize> = Vec::with_capacity(self.xs.len());
        let keep = if self.head != 1.0 { 2 } else { 0 };
        for i in 0..self.xs.len() {
            while h.len() >= 2 && h.len() > keep {
                let a = h[h.len() - 2];
                let b = h[h.len() - 1];
                let cross = (self.xs[b] - self.xs[a]) * (self.ys[i] - self.ys[a])
                    - (self.ys[b] - self.ys[a]) * (self.xs[i] - self.xs[a]);
                if cross <= 0.0 {
                    h.pop();
                } else {
                    break;
                }
            }
            h.push(i);
        }
        h
    }

    /// Replace the knots by their lower convex hull (values can only decrease).
    pub fn convexified(&self) -> Sampled {
        let h = self.hull();
        let xs: Vec<f64> = h.iter().map(|&i| self.xs[i]).collect();
        let ys: Vec<f64> = h.iter().map(|&i| self.ys[i]).collect();
        let mut s = Sampled { xs, ys, head: self.head, tail: self.tail, convex: true };
        if let Tail::Power(p) = s.tail {
            let k = s.xs.len();
            if k >= 2 {
                let m = s.slope(k - 2);
                let q = m * s.last_x() / s.last_y().max(f64::MIN_POSITIVE);
                if q > p {
                    s.tail = Tail::Power(q);
                }
            }
        }
        s.convex = s.check_convex();
        s
    }

    /// Exact Legendre transform of the piecewise-linear model (of its convex
    /// hull), returned in the same representation.
    pub fn conjugate(&self) -> Sampled {
        let h = self.convexified();
        let n = h.xs.len();
        let mut xs = vec![0.0];
        let mut ys = vec![0.0];
        let mut head = 1.0;
        if h.head > 1.0 && n >= 2 && h.ys[1] > 0.0 {
            // power head y1 (s/x1)^p conjugates to a power head of exponent p'
            let p = h.head;
            let th = p * h.ys[1] / h.xs[1];
            xs.push(th);
            ys.push((p - 1.0) * h.ys[1]);
            head = p / (p - 1.0);
        }
        for i in 0..n - 1 {
            let m = if i == 0 && h.head != 1.0 { h.slope(0) * h.head } else { h.slope(i) };
            if i == 0 && h.head > 1.0 {
                continue;
            }
            let v = h.xs[i + 1] * m - h.ys[i + 1];
            if m > *xs.last().unwrap() {
                xs.push(m);
                ys.push(v.max(*ys.last().unwrap()));
            }
        }
        let (xl, yl) = (h.last_x(), h.last_y());
        let tail = match h.tail {
            Tail::Infinite => Tail::Linear(xl),
            Tail::Linear(m) => {
                if m > *xs.last().unwrap() {
                    xs.push(m);
                    ys.push((xl * m - yl).max(*ys.last().unwrap()));
                }
                Tail::Infinite
            }
            Tail::Power(p) => {
                if p <= 1.0 || yl == 0.0 {
                    let m = if xl > 0.0 { yl / xl } else { 0.0 };
                    if m > *xs.last().unwrap() {
                        xs.push(m);
                        ys.push((xl * m - yl).max(*ys.last().unwrap()));
                    }
                    Tail::Infinite
                } else {
                    let t1 = p * yl / xl;
                    if t1 > *xs.last().unwrap() {
                        xs.push(t1);
                        ys.push(((p - 1.0) * yl).max(*ys.last().unwrap()));
                    }
                    Tail::Power(p / (p - 1.0))
                }
            }
        };
        let mut s = Sampled { xs, ys, head, tail, convex: true };
        s.convex = s.check_convex();
        s
    }
}
