//! Multi-index dynamic program for loop hafnians of banded matrices with
//! repeated rows/columns.
//!
//! For a base matrix A with bandwidth w and a multiplicity vector s, the
//! expanded matrix A_s (index i repeated s_i times) has a loop hafnian
//! computable without materializing A_s: process base indices t = 1..n
//! keeping a table over bounded multi-indices d on the window
//! X_t = {max(t-2w,1), ..., t}. The entry at d is the *scaled subhafnian*
//!
//!   H_t(d) = lhaf(A at multiplicities: s below the window, d on it) / d!
//!
//! with d! running over all absorbed multiplicities. Absorbing index t
//! distributes its d_t copies among loops on t (sigma copies, weighted by
//! the constant-matrix loop hafnian T_sigma of the diagonal entry) and
//! edges to in-window partners i (d_i copies each, weighted A_it^{d_i} /
//! d_i!); that per-index factor table G_t combines with the previous table
//! by convolution over the window. When the window slides, the departing
//! index must already be at full multiplicity, so the table is re-based
//! with that coordinate pinned to its bound.
//!
//! The engine also accepts a replacement diagonal v: copies of index i
//! loop with weight v_i while distinct copies still couple through A_ii.
//! The per-index loop factor then generalizes from T_sigma(A_tt) to the
//! two-parameter recursion of [`t_poly_with_diag`]. This is exactly the
//! structure of the extended adjacency matrix of a displaced Gaussian
//! state, whose diagonal carries gamma instead of A's own diagonal.

use num_complex::Complex64 as C64;

use super::telephone::t_poly_with_diag;
use crate::matrixcore::{
    bandwidth, exceeds, extract_principal, ComplexMatrix, RepetitionVector, BAND_TOL, SYM_TOL,
};
use crate::{Error, Result};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Table size up to which convolutions are evaluated by direct summation;
/// beyond it the multidimensional FFT path takes over.
pub const CONV_DIRECT_LIMIT: usize = 4096;

/// DP table over bounded multi-indices on a contiguous index window.
///
/// Axis j covers base index `start + j` (1-based) and runs 0..=bounds[j].
/// Values are stored mixed-radix with axis 0 fastest: the entry for d sits
/// at offset d_0 + (bounds_0+1) * (d_1 + (bounds_1+1) * (...)).
#[derive(Clone, Debug)]
pub struct SubhafnianTableRep {
    pub start: usize,
    pub bounds: Vec<u32>,
    pub values: Vec<C64>,
}

fn strides_of(bounds: &[u32]) -> (Vec<usize>, usize) {
    let mut st = Vec::with_capacity(bounds.len());
    let mut cap = 1usize;
    for &b in bounds {
        st.push(cap);
        cap *= b as usize + 1;
    }
    (st, cap)
}

impl SubhafnianTableRep {
    /// Table holding 1 at multi-index 0 and 0 elsewhere: the convolution
    /// identity.
    pub fn delta(start: usize, bounds: Vec<u32>) -> Self {
        let (_, cap) = strides_of(&bounds);
        let mut values = vec![ZERO; cap];
        values[0] = ONE;
        Self {
            start,
            bounds,
            values,
        }
    }

    pub fn axes(&self) -> usize {
        self.bounds.len()
    }

    fn offset(&self, d: &[u32]) -> Result<usize> {
        if d.len() != self.bounds.len() {
            return Err(Error::Dimension(format!(
                "multi-index of length {} for table with {} axes",
                d.len(),
                self.bounds.len()
            )));
        }
        let mut off = 0usize;
        let mut stride = 1usize;
        for (ax, (&di, &bi)) in d.iter().zip(&self.bounds).enumerate() {
            if di > bi {
                return Err(Error::Precondition(format!(
                    "multi-index entry {di} exceeds bound {bi} on axis {ax}"
                )));
            }
            off += di as usize * stride;
            stride *= bi as usize + 1;
        }
        Ok(off)
    }

    pub fn get(&self, d: &[u32]) -> Result<C64> {
        Ok(self.values[self.offset(d)?])
    }
}

/// Convolution of two tables over the same window and bounds:
/// out(d) = sum over e + f = d of h1(e) h2(f), discarding sums beyond the
/// bounds. Direct summation for tables of at most [`CONV_DIRECT_LIMIT`]
/// entries, multidimensional FFT with per-axis zero-padding to 2 s_i + 2
/// otherwise (the padding prevents circular wrap-around).
pub fn convolve(h1: &SubhafnianTableRep, h2: &SubhafnianTableRep) -> Result<SubhafnianTableRep> {
    if h1.start != h2.start || h1.bounds != h2.bounds {
        return Err(Error::Dimension(
            "convolution of tables over different windows or bounds".into(),
        ));
    }
    let values = if h1.values.len() <= CONV_DIRECT_LIMIT {
        conv_direct(&h1.bounds, &h1.values, &h2.values)
    } else {
        conv_fft(&h1.bounds, &h1.values, &h2.values)
    };
    Ok(SubhafnianTableRep {
        start: h1.start,
        bounds: h1.bounds.clone(),
        values,
    })
}

fn conv_direct(b: &[u32], v1: &[C64], v2: &[C64]) -> Vec<C64> {
    let (st, cap) = strides_of(b);
    let axes = b.len();
    let mut out = vec![ZERO; cap];
    if axes == 0 {
        out[0] = v1[0] * v2[0];
        return out;
    }
    let mut e = vec![0u32; axes];
    let mut f = vec![0u32; axes];
    let mut rem = vec![0u32; axes];
    for (e_off, &a1) in v1.iter().enumerate() {
        if a1 != ZERO {
            // enumerate f <= b - e entrywise; offsets stay valid in the
            // full radix because no axis overflows its bound
            for ax in 0..axes {
                rem[ax] = b[ax] - e[ax];
            }
            f.iter_mut().for_each(|x| *x = 0);
            let mut f_off = 0usize;
            'inner: loop {
                let a2 = v2[f_off];
                if a2 != ZERO {
                    out[e_off + f_off] += a1 * a2;
                }
                let mut ax = 0;
                loop {
                    if ax == axes {
                        break 'inner;
                    }
                    if f[ax] < rem[ax] {
                        f[ax] += 1;
                        f_off += st[ax];
                        break;
                    }
                    f_off -= f[ax] as usize * st[ax];
                    f[ax] = 0;
                    ax += 1;
                }
            }
        }
        for ax in 0..axes {
            if e[ax] < b[ax] {
                e[ax] += 1;
                break;
            }
            e[ax] = 0;
        }
    }
    out
}

fn conv_fft(b: &[u32], v1: &[C64], v2: &[C64]) -> Vec<C64> {
    use rustfft::FftPlanner;

    let axes = b.len();
    let pdims: Vec<usize> = b.iter().map(|&s| 2 * s as usize + 2).collect();
    let (pst, pcap) = {
        let mut st = Vec::with_capacity(axes);
        let mut cap = 1usize;
        for &d in &pdims {
            st.push(cap);
            cap *= d;
        }
        (st, cap)
    };
    let mut buf1 = vec![ZERO; pcap];
    let mut buf2 = vec![ZERO; pcap];
    embed(b, &pst, v1, &mut buf1);
    embed(b, &pst, v2, &mut buf2);

    let mut planner = FftPlanner::<f64>::new();
    for ax in 0..axes {
        let fft = planner.plan_fft_forward(pdims[ax]);
        fft_axis(&mut buf1, &pdims, &pst, ax, fft.as_ref());
        let fft = planner.plan_fft_forward(pdims[ax]);
        fft_axis(&mut buf2, &pdims, &pst, ax, fft.as_ref());
    }
    for (z1, z2) in buf1.iter_mut().zip(&buf2) {
        *z1 *= *z2;
    }
    for ax in 0..axes {
        let fft = planner.plan_fft_inverse(pdims[ax]);
        fft_axis(&mut buf1, &pdims, &pst, ax, fft.as_ref());
    }
    let scale = 1.0 / pcap as f64;

    let (_, cap) = strides_of(b);
    let mut out = vec![ZERO; cap];
    let mut idx = vec![0u32; axes];
    let mut poff = 0usize;
    for slot in out.iter_mut() {
        *slot = buf1[poff] * scale;
        for ax in 0..axes {
            if idx[ax] < b[ax] {
                idx[ax] += 1;
                poff += pst[ax];
                break;
            }
            poff -= idx[ax] as usize * pst[ax];
            idx[ax] = 0;
        }
    }
    out
}

/// Copy a compact table into the zero-padded buffer.
fn embed(b: &[u32], pst: &[usize], v: &[C64], buf: &mut [C64]) {
    let axes = b.len();
    let mut idx = vec![0u32; axes];
    let mut poff = 0usize;
    for &z in v {
        buf[poff] = z;
        for ax in 0..axes {
            if idx[ax] < b[ax] {
                idx[ax] += 1;
                poff += pst[ax];
                break;
            }
            poff -= idx[ax] as usize * pst[ax];
            idx[ax] = 0;
        }
    }
}

/// In-place FFT along one axis of a multidimensional buffer.
fn fft_axis(buf: &mut [C64], dims: &[usize], st: &[usize], ax: usize, fft: &dyn rustfft::Fft<f64>) {
    let l = dims[ax];
    let stride = st[ax];
    let mut line = vec![ZERO; l];
    // enumerate the base offset of every line: all coordinates free except
    // the processed axis, which is pinned to 0
    let others: Vec<usize> = (0..dims.len()).filter(|&d| d != ax).collect();
    let mut idx = vec![0usize; others.len()];
    let mut base = 0usize;
    let lines: usize = others.iter().map(|&d| dims[d]).product();
    for _ in 0..lines {
        for (k, slot) in line.iter_mut().enumerate() {
            *slot = buf[base + k * stride];
        }
        fft.process(&mut line);
        for (k, &z) in line.iter().enumerate() {
            buf[base + k * stride] = z;
        }
        for (pos, &d) in others.iter().enumerate() {
            if idx[pos] + 1 < dims[d] {
                idx[pos] += 1;
                base += st[d];
                break;
            }
            base -= idx[pos] * st[d];
            idx[pos] = 0;
        }
    }
}

/// Incremental repetition DP. Callers validate symmetry/bandwidth and
/// choose the window parameter w (>= measured bandwidth; the sampler also
/// keeps w >= 1 so the final window always spans its two readout axes).
pub(crate) struct RepDp<'m> {
    a: &'m ComplexMatrix,
    diag: Vec<C64>,
    s: Vec<u32>,
    w: usize,
    t: usize,
    table: SubhafnianTableRep,
}

impl<'m> RepDp<'m> {
    pub fn new(a: &'m ComplexMatrix, diag: Vec<C64>, s: Vec<u32>, w: usize) -> Self {
        debug_assert_eq!(a.dim(), diag.len());
        debug_assert_eq!(a.dim(), s.len());
        Self {
            a,
            diag,
            s,
            w,
            t: 0,
            table: SubhafnianTableRep {
                start: 1,
                bounds: Vec::new(),
                values: vec![ONE],
            },
        }
    }

    pub fn table(&self) -> &SubhafnianTableRep {
        &self.table
    }

    /// Absorb base index t+1.
    pub fn advance(&mut self) {
        let t = self.t + 1;
        debug_assert!(t <= self.a.dim());
        let start = t.saturating_sub(2 * self.w).max(1);
        let l = t - start + 1;

        // re-base the previous table onto {start .. t-1}
        let (htil_bounds, htil_values): (Vec<u32>, Vec<C64>) = if start == self.table.start {
            (self.table.bounds.clone(), self.table.values.clone())
        } else {
            // window slid: the departing index start-1 is out of band for
            // everything from t on, so only entries with it saturated
            // survive
            let r0 = self.table.bounds[0] as usize + 1;
            let pin = self.table.bounds[0] as usize;
            let inner = self.table.values.len() / r0;
            (
                self.table.bounds[1..].to_vec(),
                (0..inner)
                    .map(|j| self.table.values[j * r0 + pin])
                    .collect(),
            )
        };
        debug_assert_eq!(htil_bounds.len(), l - 1);

        // per-index factor table G over {start .. t}
        let sb: Vec<u32> = (start..=t).map(|i| self.s[i - 1]).collect();
        let st_bound = sb[l - 1];
        let att = self.a.get(t - 1, t - 1);
        // loop factors: T_sigma(att with diagonal v_t) / sigma!
        let tp: Vec<C64> = (0..=st_bound)
            .map(|k| t_poly_with_diag(k as usize, att, self.diag[t - 1]) / factorial(k))
            .collect();
        // partner factors: A_it^k / k!
        let pows: Vec<Vec<C64>> = (0..l - 1)
            .map(|ax| {
                // axis ax covers base index start+ax (1-based)
                let aij = self.a.get(start + ax - 1, t - 1);
                let mut col = Vec::with_capacity(sb[ax] as usize + 1);
                let mut cur = ONE;
                col.push(cur);
                for k in 1..=sb[ax] {
                    cur = cur * aij / k as f64;
                    col.push(cur);
                }
                col
            })
            .collect();
        let (_, gcap) = strides_of(&sb);
        let mut gvals = vec![ZERO; gcap];
        let mut d = vec![0u32; l];
        for slot in gvals.iter_mut() {
            let partners: u32 = d[..l - 1].iter().sum();
            if d[l - 1] >= partners {
                let sigma = (d[l - 1] - partners) as usize;
                let mut v = tp[sigma];
                for ax in 0..l - 1 {
                    v *= pows[ax][d[ax] as usize];
                }
                *slot = v;
            }
            for ax in 0..l {
                if d[ax] < sb[ax] {
                    d[ax] += 1;
                    break;
                }
                d[ax] = 0;
            }
        }
        let g = SubhafnianTableRep {
            start,
            bounds: sb.clone(),
            values: gvals,
        };

        // extend the re-based table with the new axis at coordinate 0;
        // the new axis is the most significant, so extension is a resize
        let mut ext_values = htil_values;
        let ext_cap = g.values.len();
        ext_values.resize(ext_cap, ZERO);
        let ext = SubhafnianTableRep {
            start,
            bounds: sb,
            values: ext_values,
        };

        self.table = convolve(&g, &ext).expect("windows match by construction");
        self.t = t;
    }

    /// Table value at given window coordinates.
    pub fn value_at(&self, d: &[u32]) -> Result<C64> {
        self.table.get(d)
    }

    /// Table value with every window coordinate at its bound.
    pub fn saturated(&self) -> C64 {
        *self.table.values.last().expect("table never empty")
    }
}

pub(crate) fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Product of s_i! over all indices.
pub(crate) fn pattern_factorial(s: &[u32]) -> f64 {
    s.iter().map(|&k| factorial(k)).product()
}

/// Loop hafnian of the expanded matrix repeat_pattern(A, s) with its
/// diagonal overwritten by the correspondingly repeated vector v, without
/// building the expansion. A must be symmetric with bandwidth at most w;
/// indices with s_i = 0 are deleted up front and the DP runs at the
/// compacted matrix's measured bandwidth.
pub fn lhaf_banded_rep_fdiag(
    a: &ComplexMatrix,
    v: &[C64],
    w: usize,
    s: &RepetitionVector,
) -> Result<C64> {
    let n = a.dim();
    if s.len() != n || v.len() != n {
        return Err(Error::Dimension(format!(
            "repetition vector of length {} and diagonal of length {} for {}x{} matrix",
            s.len(),
            v.len(),
            n,
            n
        )));
    }
    let dev = a.symmetry_deviation();
    if exceeds(dev, SYM_TOL) {
        return Err(Error::Symmetry {
            max_dev: dev,
            tol: SYM_TOL,
        });
    }
    let measured = bandwidth(a, BAND_TOL);
    if measured > w {
        return Err(Error::Bandwidth {
            declared: w,
            measured,
        });
    }
    // delete zero-multiplicity indices
    let keep: Vec<usize> = (0..n).filter(|&i| s.0[i] > 0).map(|i| i + 1).collect();
    if keep.is_empty() {
        return Ok(ONE);
    }
    let ac = extract_principal(a, &keep)?;
    let vc: Vec<C64> = keep.iter().map(|&i| v[i - 1]).collect();
    let sc: Vec<u32> = keep.iter().map(|&i| s.0[i - 1]).collect();
    let w_eff = bandwidth(&ac, BAND_TOL);
    let mut dp = RepDp::new(&ac, vc, sc.clone(), w_eff);
    for _ in 0..ac.dim() {
        dp.advance();
    }
    Ok(dp.saturated() * pattern_factorial(&sc))
}

/// Loop hafnian of repeat_pattern(A, s) for a banded symmetric A: the
/// expanded matrix keeps A's own diagonal.
pub fn lhaf_banded_rep(a: &ComplexMatrix, w: usize, s: &RepetitionVector) -> Result<C64> {
    let diag = a.diag();
    lhaf_banded_rep_fdiag(a, &diag, w, s)
}
