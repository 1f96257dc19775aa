//! Flat facet-shell triangle: constant-strain membrane superposed with a
//! discrete-Kirchhoff bending triangle and a zero-row-sum drilling penalty.
//!
//! Each node carries 6 dofs (u, v, w, rx, ry, rz); the element matrix is
//! 18x18, formed in the element plane and rotated to global axes. All
//! element math is SI (m, Pa).

use nalgebra::{Matrix3, SMatrix};

use crate::error::{Error, Result};

pub type ElementMatrix = SMatrix<f64, 18, 18>;

/// Fraction of G*t*A used for the drilling penalty. Small enough not to
/// pollute bending, large enough to keep the factorization well scaled.
const DRILL_ALPHA: f64 = 1.0e-3;

/// Geometry of one element in its own plane.
pub struct LocalFrame {
    /// Rows are the local x, y, z axes in global coordinates.
    pub rotation: Matrix3<f64>,
    /// In-plane node coordinates: node 1 at origin, node 2 on +x.
    pub xy: [[f64; 2]; 3],
    /// m^2
    pub area: f64,
}

pub fn local_frame(coords: &[[f64; 3]; 3]) -> Result<LocalFrame> {
    let p1 = nalgebra::Vector3::from(coords[0]);
    let p2 = nalgebra::Vector3::from(coords[1]);
    let p3 = nalgebra::Vector3::from(coords[2]);
    let e12 = p2 - p1;
    let e13 = p3 - p1;
    let normal = e12.cross(&e13);
    let double_area = normal.norm();
    let len12 = e12.norm();
    if !(double_area > 1.0e-18 && len12 > 0.0) {
        return Err(Error::Meshing("degenerate element geometry".to_string()));
    }
    let x_axis = e12 / len12;
    let z_axis = normal / double_area;
    let y_axis = z_axis.cross(&x_axis);
    let rotation = Matrix3::from_rows(&[x_axis.transpose(), y_axis.transpose(), z_axis.transpose()]);
    let xy = [
        [0.0, 0.0],
        [len12, 0.0],
        [e13.dot(&x_axis), e13.dot(&y_axis)],
    ];
    Ok(LocalFrame {
        rotation,
        xy,
        area: 0.5 * double_area,
    })
}

/// Plane-stress constitutive matrix E/(1-nu^2) * [[1,nu,0],[nu,1,0],[0,0,(1-nu)/2]].
pub fn plane_stress(e: f64, nu: f64) -> Matrix3<f64> {
    let f = e / (1.0 - nu * nu);
    Matrix3::new(
        f,
        f * nu,
        0.0,
        f * nu,
        f,
        0.0,
        0.0,
        0.0,
        f * (1.0 - nu) / 2.0,
    )
}

/// Membrane strain-displacement matrix (3x6, dofs u1 v1 u2 v2 u3 v3),
/// constant over the element.
pub fn membrane_b(xy: &[[f64; 2]; 3], area: f64) -> SMatrix<f64, 3, 6> {
    let [p1, p2, p3] = *xy;
    let (y23, y31, y12) = (p2[1] - p3[1], p3[1] - p1[1], p1[1] - p2[1]);
    let (x32, x13, x21) = (p3[0] - p2[0], p1[0] - p3[0], p2[0] - p1[0]);
    SMatrix::<f64, 3, 6>::from_row_slice(&[
        y23, 0.0, y31, 0.0, y12, 0.0, //
        0.0, x32, 0.0, x13, 0.0, x21, //
        x32, y23, x13, y31, x21, y12,
    ]) / (2.0 * area)
}

/// Side coefficients of the discrete-Kirchhoff bending triangle.
struct DktSides {
    a: [f64; 3],
    b: [f64; 3],
    c: [f64; 3],
    d: [f64; 3],
    e: [f64; 3],
}

fn dkt_sides(xy: &[[f64; 2]; 3]) -> DktSides {
    // Side k spans nodes (i, j): side 0 = (2,3), side 1 = (3,1), side 2 = (1,2).
    let pairs = [(1usize, 2usize), (2, 0), (0, 1)];
    let mut s = DktSides {
        a: [0.0; 3],
        b: [0.0; 3],
        c: [0.0; 3],
        d: [0.0; 3],
        e: [0.0; 3],
    };
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let xij = xy[i][0] - xy[j][0];
        let yij = xy[i][1] - xy[j][1];
        let l2 = xij * xij + yij * yij;
        s.a[k] = -xij / l2;
        s.b[k] = 0.75 * xij * yij / l2;
        s.c[k] = (0.25 * xij * xij - 0.5 * yij * yij) / l2;
        s.d[k] = -yij / l2;
        s.e[k] = (0.25 * yij * yij - 0.5 * xij * xij) / l2;
    }
    s
}

/// Rotation interpolation vectors (Hx, Hy) at area coordinates (xi, eta).
/// Dof order per node: (w, rx, ry). Quadratic in (xi, eta).
fn dkt_h(s: &DktSides, xi: f64, eta: f64) -> ([f64; 9], [f64; 9]) {
    let lambda = 1.0 - xi - eta;
    let n = [
        lambda * (2.0 * lambda - 1.0), // corner 1
        xi * (2.0 * xi - 1.0),         // corner 2
        eta * (2.0 * eta - 1.0),       // corner 3
        4.0 * xi * eta,                // midside (2,3)
        4.0 * eta * lambda,            // midside (3,1)
        4.0 * xi * lambda,             // midside (1,2)
    ];
    let (a, b, c, d, e) = (&s.a, &s.b, &s.c, &s.d, &s.e);
    let hx = [
        1.5 * (a[2] * n[5] - a[1] * n[4]),
        b[1] * n[4] + b[2] * n[5],
        n[0] - c[1] * n[4] - c[2] * n[5],
        1.5 * (a[0] * n[3] - a[2] * n[5]),
        b[2] * n[5] + b[0] * n[3],
        n[1] - c[2] * n[5] - c[0] * n[3],
        1.5 * (a[1] * n[4] - a[0] * n[3]),
        b[0] * n[3] + b[1] * n[4],
        n[2] - c[0] * n[3] - c[1] * n[4],
    ];
    let hy = [
        1.5 * (d[2] * n[5] - d[1] * n[4]),
        -n[0] + e[1] * n[4] + e[2] * n[5],
        -b[1] * n[4] - b[2] * n[5],
        1.5 * (d[0] * n[3] - d[2] * n[5]),
        -n[1] + e[2] * n[5] + e[0] * n[3],
        -b[2] * n[5] - b[0] * n[3],
        1.5 * (d[1] * n[4] - d[0] * n[3]),
        -n[2] + e[0] * n[3] + e[1] * n[4],
        -b[0] * n[3] - b[1] * n[4],
    ];
    (hx, hy)
}

/// Curvature-displacement matrix of the bending triangle at (xi, eta),
/// 3x9 over (w1, rx1, ry1, ..., ry3). The H fields are quadratic, so a
/// central difference with any step is their exact derivative.
pub fn dkt_b(xy: &[[f64; 2]; 3], area: f64, xi: f64, eta: f64) -> SMatrix<f64, 3, 9> {
    let s = dkt_sides(xy);
    let h = 0.25;
    let diff = |fx: f64, fe: f64, gx: f64, ge: f64| (dkt_h(&s, fx, fe), dkt_h(&s, gx, ge));

    let ((hx_xp, hy_xp), (hx_xm, hy_xm)) = diff(xi + h, eta, xi - h, eta);
    let ((hx_ep, hy_ep), (hx_em, hy_em)) = diff(xi, eta + h, xi, eta - h);

    let [p1, p2, p3] = *xy;
    let (y31, y12) = (p3[1] - p1[1], p1[1] - p2[1]);
    let (x31, x12) = (p3[0] - p1[0], p1[0] - p2[0]);
    let inv_2a = 1.0 / (2.0 * area);

    let mut bm = SMatrix::<f64, 3, 9>::zeros();
    for i in 0..9 {
        let hx_xi = (hx_xp[i] - hx_xm[i]) / (2.0 * h);
        let hx_eta = (hx_ep[i] - hx_em[i]) / (2.0 * h);
        let hy_xi = (hy_xp[i] - hy_xm[i]) / (2.0 * h);
        let hy_eta = (hy_ep[i] - hy_em[i]) / (2.0 * h);
        bm[(0, i)] = inv_2a * (y31 * hx_xi + y12 * hx_eta);
        bm[(1, i)] = inv_2a * (-x31 * hy_xi - x12 * hy_eta);
        bm[(2, i)] = inv_2a * (-x31 * hx_xi - x12 * hx_eta + y31 * hy_xi + y12 * hy_eta);
    }
    bm
}

/// Quadrature for the bending stiffness: the three mid-side points
/// integrate the quadratic integrand exactly.
const DKT_POINTS: [(f64, f64); 3] = [(0.5, 0.0), (0.5, 0.5), (0.0, 0.5)];

/// Full element stiffness in global coordinates.
///
/// `coords` in metres, `thickness` in metres, `e` in Pa.
pub fn element_stiffness(
    coords: &[[f64; 3]; 3],
    e: f64,
    nu: f64,
    thickness: f64,
) -> Result<ElementMatrix> {
    let frame = local_frame(coords)?;
    let d0 = plane_stress(e, nu);
    let local = local_stiffness(&frame, &d0, e, nu, thickness);

    // K_global = T^T K_local T with T block-diagonal in the 3x3 rotation.
    let mut global = ElementMatrix::zeros();
    let r = &frame.rotation;
    // (T^T K T)[6i+a, 6j+b] over 3x3 sub-blocks indexed by dof triples.
    for bi in 0..6 {
        for bj in 0..6 {
            let mut block = Matrix3::zeros();
            for a in 0..3 {
                for b in 0..3 {
                    block[(a, b)] = local[(3 * bi + a, 3 * bj + b)];
                }
            }
            let rotated = r.transpose() * block * r;
            for a in 0..3 {
                for b in 0..3 {
                    global[(3 * bi + a, 3 * bj + b)] = rotated[(a, b)];
                }
            }
        }
    }
    Ok(global)
}

/// Element stiffness in the local frame, dof order
/// (u, v, w, rx, ry, rz) x 3 nodes, viewed as 6 dof-triples for rotation.
fn local_stiffness(
    frame: &LocalFrame,
    d0: &Matrix3<f64>,
    e: f64,
    nu: f64,
    thickness: f64,
) -> ElementMatrix {
    let area = frame.area;
    let mut k = ElementMatrix::zeros();

    // Membrane: K_m = t A B^T D B, dofs (u, v) per node.
    let bm = membrane_b(&frame.xy, area);
    let km = bm.transpose() * d0 * bm * (thickness * area);
    let m_map = [0usize, 1, 6, 7, 12, 13];
    for i in 0..6 {
        for j in 0..6 {
            k[(m_map[i], m_map[j])] += km[(i, j)];
        }
    }

    // Bending: 3-point quadrature of B^T Db B, dofs (w, rx, ry) per node.
    let db = d0 * (thickness.powi(3) / 12.0);
    let mut kb = SMatrix::<f64, 9, 9>::zeros();
    for (xi, eta) in DKT_POINTS {
        let b = dkt_b(&frame.xy, area, xi, eta);
        kb += b.transpose() * db * b * (2.0 * area / 6.0);
    }
    let b_map = [2usize, 3, 4, 8, 9, 10, 14, 15, 16];
    for i in 0..9 {
        for j in 0..9 {
            k[(b_map[i], b_map[j])] += kb[(i, j)];
        }
    }

    // Drilling penalty: zero-row-sum pattern so rigid rotation about the
    // element normal stays load-free.
    let g = e / (2.0 * (1.0 + nu));
    let kd = DRILL_ALPHA * g * thickness * area;
    let d_map = [5usize, 11, 17];
    for i in 0..3 {
        for j in 0..3 {
            let v = if i == j { kd } else { -0.5 * kd };
            k[(d_map[i], d_map[j])] += v;
        }
    }

    k
}

/// Membrane stress (sigma_x, sigma_y, tau_xy) and bending surface stress for
/// one element given its 18 global dofs; used for von Mises recovery.
/// Displacements in m/rad, stresses in Pa.
pub fn element_stress(
    coords: &[[f64; 3]; 3],
    e: f64,
    nu: f64,
    thickness: f64,
    u_global: &[f64; 18],
) -> Result<([f64; 3], [f64; 3])> {
    let frame = local_frame(coords)?;
    let d0 = plane_stress(e, nu);

    // Rotate nodal dofs into the element frame.
    let mut u_local = [0.0f64; 18];
    for block in 0..6 {
        let v = nalgebra::Vector3::new(
            u_global[3 * block],
            u_global[3 * block + 1],
            u_global[3 * block + 2],
        );
        let w = frame.rotation * v;
        u_local[3 * block] = w[0];
        u_local[3 * block + 1] = w[1];
        u_local[3 * block + 2] = w[2];
    }

    let bm = membrane_b(&frame.xy, frame.area);
    let um = nalgebra::SVector::<f64, 6>::from([
        u_local[0], u_local[1], u_local[6], u_local[7], u_local[12], u_local[13],
    ]);
    let sigma_m = d0 * bm * um;

    // Curvature at the centroid; surface bending stress is 6 m / t^2
    // with moments m = Db * kappa.
    let bb = dkt_b(&frame.xy, frame.area, 1.0 / 3.0, 1.0 / 3.0);
    let ub = nalgebra::SVector::<f64, 9>::from([
        u_local[2], u_local[3], u_local[4], u_local[8], u_local[9], u_local[10], u_local[14],
        u_local[15], u_local[16],
    ]);
    let db = d0 * (thickness.powi(3) / 12.0);
    let moments = db * bb * ub;
    let sigma_b = moments * (6.0 / (thickness * thickness));

    Ok((
        [sigma_m[0], sigma_m[1], sigma_m[2]],
        [sigma_b[0], sigma_b[1], sigma_b[2]],
    ))
}

/// von Mises equivalent of a plane-stress state.
pub fn von_mises(s: &[f64; 3]) -> f64 {
    (s[0] * s[0] - s[0] * s[1] + s[1] * s[1] + 3.0 * s[2] * s[2])
        .max(0.0)
        .sqrt()
}
