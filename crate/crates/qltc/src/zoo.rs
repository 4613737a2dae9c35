//! Small code families used as transformation inputs and test anchors.

use crate::css::CssCode;
use crate::gf2::{BitMatrix, BitVector};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Parity checks of the length-t repetition code: rows {i, i+1}.
pub fn repetition_pcm(t: usize) -> Result<BitMatrix> {
    if t < 2 {
        return Err(Error::InvalidParameter(format!(
            "repetition code needs length >= 2, got {t}"
        )));
    }
    let supports: Vec<Vec<usize>> = (0..t - 1).map(|i| vec![i, i + 1]).collect();
    Ok(BitMatrix::from_supports(t - 1, t, &supports))
}

/// Toric code on an L x L torus: 2L^2 qubits on edges, vertex X-stabilisers,
/// plaquette Z-stabilisers, k = 2, d = L.
pub fn toric_code(l: usize) -> Result<CssCode> {
    if l < 2 {
        return Err(Error::InvalidParameter(format!(
            "toric code needs L >= 2, got {l}"
        )));
    }
    let n = 2 * l * l;
    let horiz = |r: usize, c: usize| (r % l) * l + c % l;
    let vert = |r: usize, c: usize| l * l + (r % l) * l + c % l;
    let mut x_supports = Vec::with_capacity(l * l);
    let mut z_supports = Vec::with_capacity(l * l);
    for r in 0..l {
        for c in 0..l {
            x_supports.push(vec![
                horiz(r, c),
                horiz(r, c + l - 1),
                vert(r, c),
                vert(r + l - 1, c),
            ]);
            z_supports.push(vec![
                horiz(r, c),
                horiz(r + 1, c),
                vert(r, c),
                vert(r, c + 1),
            ]);
        }
    }
    let code = CssCode::new(
        BitMatrix::from_supports(l * l, n, &x_supports),
        BitMatrix::from_supports(l * l, n, &z_supports),
    )?;
    code.ensure_valid()?;
    Ok(code)
}

/// Hypergraph product of two classical check matrices:
///   H_X = [h1 (x) I_{n2} | I_{r1} (x) h2^T]
///   H_Z = [I_{n1} (x) h2 | h1^T (x) I_{r2}]
pub fn hypergraph_product(h1: &BitMatrix, h2: &BitMatrix) -> Result<CssCode> {
    let (r1, n1) = (h1.rows(), h1.cols());
    let (r2, n2) = (h2.rows(), h2.cols());
    if r1 == 0 || r2 == 0 || n1 == 0 || n2 == 0 {
        return Err(Error::InvalidParameter(
            "hypergraph product needs nonempty factors".into(),
        ));
    }
    let h_x = BitMatrix::hstack(&[
        &h1.kronecker(&BitMatrix::identity(n2)),
        &BitMatrix::identity(r1).kronecker(&h2.transpose()),
    ]);
    let h_z = BitMatrix::hstack(&[
        &BitMatrix::identity(n1).kronecker(h2),
        &h1.transpose().kronecker(&BitMatrix::identity(r2)),
    ]);
    let code = CssCode::new(h_x, h_z)?;
    code.ensure_valid()?;
    Ok(code)
}

/// Open-boundary planar code [[d^2 + (d-1)^2, 1, d]]: the hypergraph
/// product of two length-d repetition codes.
pub fn surface_code(d: usize) -> Result<CssCode> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!(
            "surface code needs distance >= 2, got {d}"
        )));
    }
    let rep = repetition_pcm(d)?;
    hypergraph_product(&rep, &rep)
}

/// Two copies of the qubit set crossed by one classical code:
///   H_X = [h | h],  H_Z = [I | I].
pub fn cross_code(h: &BitMatrix) -> Result<CssCode> {
    let n = h.cols();
    if n == 0 || h.rows() == 0 {
        return Err(Error::InvalidParameter("cross code needs a nonempty check matrix".into()));
    }
    let id = BitMatrix::identity(n);
    let code = CssCode::new(
        BitMatrix::hstack(&[h, h]),
        BitMatrix::hstack(&[&id, &id]),
    )?;
    code.ensure_valid()?;
    Ok(code)
}

/// Random valid CSS code, deterministic per seed: h_x is uniform, h_z rows
/// are uniform combinations of a kernel basis of h_x, so the pair always
/// commutes. Rows may be dependent or zero; validate reports them.
pub fn random_css(n: usize, n_x: usize, n_z: usize, seed: u64) -> Result<CssCode> {
    if n == 0 {
        return Err(Error::InvalidParameter("random code needs at least one qubit".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut h_x = BitMatrix::zeros(n_x, n);
    for r in 0..n_x {
        for c in 0..n {
            if rng.random::<bool>() {
                h_x.set(r, c, true);
            }
        }
    }
    let (_, kernel) = h_x.rank_kernel();
    let mut h_z = BitMatrix::zeros(n_z, n);
    for r in 0..n_z {
        let mut row = BitVector::zeros(n);
        for v in &kernel {
            if rng.random::<bool>() {
                row.xor_assign(v);
            }
        }
        h_z.set_row(r, &row);
    }
    let code = CssCode::new(h_x, h_z)?;
    code.ensure_valid()?;
    Ok(code)
}
