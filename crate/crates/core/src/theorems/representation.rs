//! Representation formula, splitting and the `P^v`/`Q^v` round trips for SR_v.

use crate::error::{Error, Result};
use crate::field::{exp_checked, Field};
use crate::quat::Quaternion;
use crate::slice::{check_unit_imaginary, in_slice, slice_decompose};

/// `½{e^{⟨(i−i_q)y,v⟩}(1−i_q i) f(x+iy) + e^{−⟨(i+i_q)y,v⟩}(1+i_q i) f(x−iy)}`,
/// the value at `x + i_q y` reconstructed from the slice `ℂ(i)`.
pub fn representation_v(f: &Field, v: Quaternion, x: f64, y: f64, i: Quaternion, iq: Quaternion) -> Result<Quaternion> {
    check_unit_imaginary(i)?;
    check_unit_imaginary(iq)?;
    let up = f.eval(in_slice(x, y, i))?;
    let down = f.eval(in_slice(x, -y, i))?;
    let w_up = exp_checked(((i - iq) * y).dot(v))?;
    let w_down = exp_checked(-((i + iq) * y).dot(v))?;
    Ok(((Quaternion::ONE - iq * i) * up * w_up + (Quaternion::ONE + iq * i) * down * w_down) * 0.5)
}

fn check_pair(i: Quaternion, j: Quaternion) -> Result<()> {
    check_unit_imaginary(i)?;
    check_unit_imaginary(j)?;
    if i.dot(j).abs() > 1e-12 {
        return Err(Error::NotOrthogonal);
    }
    Ok(())
}

/// Coordinates of `q = F + G j` with `F, G ∈ ℂ(i)`.
pub fn split_value(q: Quaternion, i: Quaternion, j: Quaternion) -> (Quaternion, Quaternion) {
    let k = i * j;
    (in_slice(q.q0, q.dot(i), i), in_slice(q.dot(j), q.dot(k), i))
}

/// `F + G j`.
pub fn join_value(fv: Quaternion, gv: Quaternion, j: Quaternion) -> Quaternion {
    fv + gv * j
}

/// The slice components `F`, `G` with `f = F + G j` on `ℂ(i)`.
pub fn splitting_v(f: &Field, i: Quaternion, j: Quaternion) -> Result<(Field, Field)> {
    check_pair(i, j)?;
    let (f1, f2) = (f.clone(), f.clone());
    let big_f = Field::try_new(format!("F[{}]", f.name()), move |z| Ok(split_value(f1.eval(z)?, i, j).0));
    let big_g = Field::try_new(format!("G[{}]", f.name()), move |z| Ok(split_value(f2.eval(z)?, i, j).1));
    Ok((big_f, big_g))
}

/// `P^v_{i,j}(F, G)`: extend the slice pair to all of ℍ through the representation formula.
pub fn extend_pair(big_f: &Field, big_g: &Field, v: Quaternion, i: Quaternion, j: Quaternion) -> Result<Field> {
    check_pair(i, j)?;
    let (bf, bg) = (big_f.clone(), big_g.clone());
    let h = Field::try_new("F+Gj", move |z| Ok(join_value(bf.eval(z)?, bg.eval(z)?, j)));
    Ok(Field::try_new(format!("P[{}]", big_f.name()), move |q| {
        let p = slice_decompose(q)?;
        representation_v(&h, v, p.x, p.y, i, p.i)
    }))
}

/// Max errors of `P∘Q` against `f` and of `Q∘P` against `(F, G)` over `points`.
///
/// `Q∘P` is read off at the given points projected into `ℂ(i)`; points in the lower half
/// of the slice go through the representation formula with `i_q = −i`.
pub fn pq_roundtrip(
    f: &Field,
    v: Quaternion,
    i: Quaternion,
    j: Quaternion,
    points: &[Quaternion],
) -> Result<(f64, f64)> {
    let (big_f, big_g) = splitting_v(f, i, j)?;
    let p = extend_pair(&big_f, &big_g, v, i, j)?;
    let mut pq = 0.0f64;
    let mut qp = 0.0f64;
    for &q in points {
        pq = pq.max(p.eval(q)?.max_abs_diff(f.eval(q)?));
        let s = slice_decompose(q)?;
        let sign = if s.i.dot(i) >= 0.0 { 1.0 } else { -1.0 };
        let z = in_slice(s.x, sign * s.y, i);
        let (fz, gz) = split_value(p.eval(z)?, i, j);
        qp = qp.max(fz.max_abs_diff(big_f.eval(z)?).max(gz.max_abs_diff(big_g.eval(z)?)));
    }
    Ok((pq, qp))
}
