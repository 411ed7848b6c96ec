//! Built-in algebras and their default base actions.
//!
//! | name            | basis                                   | chart      |
//! |-----------------|-----------------------------------------|------------|
//! | `abelian(n)`    | `e0 .. e{n-1}`                          | none       |
//! | `heisenberg(n)` | `X1..Xn, Y1..Yn, Z`, `[Xi, Yi] = Z`     | none       |
//! | `so3`           | `J1, J2, J3`                            | `(x, y, z)`|
//! | `galilei1`      | `H, P, K`, `[K, H] = P`                 | `(t, x)`   |
//! | `galilei3`      | `H, P1..P3, K1..K3, J1..J3`             | `(t, x, y, z)` |
//! | `poincare4`     | `P0..P3, K1..K3, J1..J3`                | `(t, x, y, z)` |
//!
//! Conventions: `[K_i, H] = P_i`, `[J_i, J_j] = ε_ijk J_k`, `[J_i, P_j] = ε_ijk P_k`,
//! `[J_i, K_j] = ε_ijk K_k`; for Poincaré additionally `[K_i, P0] = P_i`,
//! `[K_i, P_j] = δ_ij P0`, `[K_i, K_j] = -ε_ijk J_k`.
//!
//! The fields are `X_H = d_t`, `X_P_i = d_i`, `X_K_i = -t d_i` (Galilei) or
//! `-(t d_i + x_i d_t)` (Poincaré), and `X_J_i = -ε_ijk x_j d_k`. Their signs
//! are what makes `[X_a, X_b] = X_[a,b]` hold; every constructor below goes
//! through the Jacobi and closure checks.

use std::sync::Arc;

use crate::action::{ActionRealization, AffineVectorField};
use crate::error::{Error, Result};
use crate::lie::{combo, AlgebraElement, LieAlgebra};

/// Catalog names accepted by [`catalog`], in documentation form.
pub const CATALOG_NAMES: &[&str] =
    &["abelian(n)", "heisenberg(n)", "so3", "galilei1", "galilei3", "poincare4"];

/// Looks up a catalog algebra by name, e.g. `"galilei3"` or `"abelian(2)"`.
pub fn catalog(name: &str) -> Result<(LieAlgebra, ActionRealization)> {
    let (base, param) = parse_name(name)?;
    let real = match (base.as_str(), param) {
        ("abelian", Some(n)) => abelian(n)?,
        ("heisenberg", Some(n)) => heisenberg(n)?,
        ("so3", None) => so3()?,
        ("galilei1", None) => galilei1()?,
        ("galilei3", None) => galilei3()?,
        ("poincare4", None) => poincare4()?,
        ("abelian" | "heisenberg", None) => {
            return Err(Error::InvalidParameter(format!("{base} needs a size, e.g. {base}(2)")))
        }
        ("so3" | "galilei1" | "galilei3" | "poincare4", Some(_)) => {
            return Err(Error::InvalidParameter(format!("{base} takes no parameter")))
        }
        _ => return Err(Error::UnknownAlgebra(name.to_string())),
    };
    Ok((real.algebra().clone(), real))
}

fn parse_name(name: &str) -> Result<(String, Option<usize>)> {
    let name = name.trim();
    let (base, arg) = if let Some(open) = name.find('(') {
        let inner = name[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| Error::UnknownAlgebra(name.to_string()))?;
        (&name[..open], Some(inner))
    } else if let Some((b, a)) = name.split_once(':') {
        (b, Some(a))
    } else {
        (name, None)
    };
    let param = match arg {
        None => None,
        Some(a) => Some(
            a.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidParameter(format!("bad size {a:?} in {name:?}")))?,
        ),
    };
    Ok((base.to_ascii_lowercase(), param))
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn coords(list: &[&str]) -> Vec<String> {
    names(list)
}

/// Levi-Civita triples `(i, j, k)` with sign `ε_ijk = +1`.
const CYCLIC: [(usize, usize, usize); 3] = [(0, 1, 2), (1, 2, 0), (2, 0, 1)];

pub fn abelian(n: usize) -> Result<ActionRealization> {
    if n == 0 {
        return Err(Error::InvalidParameter("abelian(n) needs n >= 1".into()));
    }
    let names = (0..n).map(|i| format!("e{i}")).collect();
    let alg = Arc::new(LieAlgebra::from_brackets(format!("abelian({n})"), names, &[])?);
    Ok(ActionRealization::trivial(alg, Vec::new()))
}

pub fn heisenberg(n: usize) -> Result<ActionRealization> {
    if n == 0 {
        return Err(Error::InvalidParameter("heisenberg(n) needs n >= 1".into()));
    }
    let dim = 2 * n + 1;
    let mut labels: Vec<String> = (1..=n).map(|i| format!("X{i}")).collect();
    labels.extend((1..=n).map(|i| format!("Y{i}")));
    labels.push("Z".into());
    let brackets: Vec<(usize, usize, AlgebraElement)> =
        (0..n).map(|i| (i, n + i, combo(dim, &[(2 * n, 1)]))).collect();
    let alg = Arc::new(LieAlgebra::from_brackets(format!("heisenberg({n})"), labels, &brackets)?);
    Ok(ActionRealization::trivial(alg, Vec::new()))
}

/// `-ε_ijk x_j d_k` on a chart whose spatial coordinates start at `offset`.
fn rotation_field(chart_dim: usize, offset: usize, axis: usize) -> Result<AffineVectorField> {
    let mut terms = Vec::new();
    for &(i, j, k) in &CYCLIC {
        if i == axis {
            terms.push((offset + k, Some(offset + j), -1));
            terms.push((offset + j, Some(offset + k), 1));
        }
    }
    AffineVectorField::from_terms(chart_dim, &terms)
}

/// Rotation brackets among three consecutive triples of basis vectors
/// starting at `j0`, acting on vector triples starting at each of `vectors`.
fn rotation_brackets(
    dim: usize,
    j0: usize,
    vectors: &[usize],
) -> Vec<(usize, usize, AlgebraElement)> {
    let mut out = Vec::new();
    for &(i, j, k) in &CYCLIC {
        out.push((j0 + i, j0 + j, combo(dim, &[(j0 + k, 1)])));
        for &v in vectors {
            out.push((j0 + i, v + j, combo(dim, &[(v + k, 1)])));
            out.push((j0 + i, v + k, combo(dim, &[(v + j, -1)])));
        }
    }
    out
}

pub fn so3() -> Result<ActionRealization> {
    let alg = Arc::new(LieAlgebra::from_brackets(
        "so3",
        names(&["J1", "J2", "J3"]),
        &rotation_brackets(3, 0, &[]),
    )?);
    let fields = (0..3).map(|a| rotation_field(3, 0, a)).collect::<Result<_>>()?;
    ActionRealization::new(alg, coords(&["x", "y", "z"]), fields)
}

pub fn galilei1() -> Result<ActionRealization> {
    // H, P, K on (t, x)
    let alg = Arc::new(LieAlgebra::from_brackets(
        "galilei1",
        names(&["H", "P", "K"]),
        &[(2, 0, combo(3, &[(1, 1)]))],
    )?);
    let fields = vec![
        AffineVectorField::from_terms(2, &[(0, None, 1)])?,
        AffineVectorField::from_terms(2, &[(1, None, 1)])?,
        AffineVectorField::from_terms(2, &[(1, Some(0), -1)])?,
    ];
    ActionRealization::new(alg, coords(&["t", "x"]), fields)
}

pub fn galilei3() -> Result<ActionRealization> {
    // H = 0, P_i = 1 + i, K_i = 4 + i, J_i = 7 + i
    let dim = 10;
    let mut brackets = rotation_brackets(dim, 7, &[1, 4]);
    for i in 0..3 {
        brackets.push((4 + i, 0, combo(dim, &[(1 + i, 1)])));
    }
    let alg = Arc::new(LieAlgebra::from_brackets(
        "galilei3",
        names(&["H", "P1", "P2", "P3", "K1", "K2", "K3", "J1", "J2", "J3"]),
        &brackets,
    )?);
    let mut fields = vec![AffineVectorField::from_terms(4, &[(0, None, 1)])?];
    for i in 0..3 {
        fields.push(AffineVectorField::from_terms(4, &[(1 + i, None, 1)])?);
    }
    for i in 0..3 {
        fields.push(AffineVectorField::from_terms(4, &[(1 + i, Some(0), -1)])?);
    }
    for a in 0..3 {
        fields.push(rotation_field(4, 1, a)?);
    }
    ActionRealization::new(alg, coords(&["t", "x", "y", "z"]), fields)
}

pub fn poincare4() -> Result<ActionRealization> {
    // P_mu = mu, K_i = 4 + i, J_i = 7 + i
    let dim = 10;
    let mut brackets = rotation_brackets(dim, 7, &[1, 4]);
    for i in 0..3 {
        brackets.push((4 + i, 0, combo(dim, &[(1 + i, 1)])));
        brackets.push((4 + i, 1 + i, combo(dim, &[(0, 1)])));
    }
    for &(i, j, k) in &CYCLIC {
        brackets.push((4 + i, 4 + j, combo(dim, &[(7 + k, -1)])));
    }
    let alg = Arc::new(LieAlgebra::from_brackets(
        "poincare4",
        names(&["P0", "P1", "P2", "P3", "K1", "K2", "K3", "J1", "J2", "J3"]),
        &brackets,
    )?);
    let mut fields = Vec::new();
    for mu in 0..4 {
        fields.push(AffineVectorField::from_terms(4, &[(mu, None, 1)])?);
    }
    for i in 0..3 {
        fields.push(AffineVectorField::from_terms(4, &[(1 + i, Some(0), -1), (0, Some(1 + i), -1)])?);
    }
    for a in 0..3 {
        fields.push(rotation_field(4, 1, a)?);
    }
    ActionRealization::new(alg, coords(&["t", "x", "y", "z"]), fields)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;

    #[test]
    fn sizes() {
        let cases = [
            ("abelian(2)", 2, 0),
            ("abelian:4", 4, 0),
            ("heisenberg(1)", 3, 0),
            ("so3", 3, 3),
            ("galilei1", 3, 2),
            ("galilei3", 10, 4),
            ("poincare4", 10, 4),
        ];
        for (name, dim, chart) in cases {
            let (alg, real) = catalog(name).unwrap();
            assert_eq!(alg.dim(), dim, "{name}");
            assert_eq!(real.chart_dim(), chart, "{name}");
            assert!(alg.check_jacobi().is_ok(), "{name}");
        }
    }

    #[test]
    fn unknown_and_bad_parameters() {
        assert!(matches!(catalog("nosuch"), Err(Error::UnknownAlgebra(_))));
        assert!(matches!(catalog("abelian"), Err(Error::InvalidParameter(_))));
        assert!(matches!(catalog("abelian(0)"), Err(Error::InvalidParameter(_))));
        assert!(matches!(catalog("abelian(x)"), Err(Error::InvalidParameter(_))));
        assert!(matches!(catalog("so3(2)"), Err(Error::InvalidParameter(_))));
    }

    fn bracket_named(alg: &LieAlgebra, a: &str, b: &str) -> Vec<Rational> {
        let x = alg.basis_element(alg.index_of(a).unwrap());
        let y = alg.basis_element(alg.index_of(b).unwrap());
        alg.bracket(&x, &y).unwrap().coords().to_vec()
    }

    fn unit(alg: &LieAlgebra, name: &str, c: i64) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); alg.dim()];
        v[alg.index_of(name).unwrap()] = Rational::from(c);
        v
    }

    #[test]
    fn galilei3_brackets() {
        let (alg, _) = catalog("galilei3").unwrap();
        assert_eq!(bracket_named(&alg, "K1", "H"), unit(&alg, "P1", 1));
        assert_eq!(bracket_named(&alg, "J1", "J2"), unit(&alg, "J3", 1));
        assert_eq!(bracket_named(&alg, "J3", "P1"), unit(&alg, "P2", 1));
        assert_eq!(bracket_named(&alg, "J2", "K3"), unit(&alg, "K1", 1));
        assert_eq!(bracket_named(&alg, "J1", "P3"), unit(&alg, "P2", -1));
        assert!(bracket_named(&alg, "K1", "P1").iter().all(Rational::is_zero));
        assert!(bracket_named(&alg, "K1", "K2").iter().all(Rational::is_zero));
    }

    #[test]
    fn so3_brackets_cyclic() {
        let (alg, _) = catalog("so3").unwrap();
        assert_eq!(bracket_named(&alg, "J1", "J2"), unit(&alg, "J3", 1));
        assert_eq!(bracket_named(&alg, "J2", "J3"), unit(&alg, "J1", 1));
        assert_eq!(bracket_named(&alg, "J3", "J1"), unit(&alg, "J2", 1));
    }

    #[test]
    fn poincare_brackets() {
        let (alg, _) = catalog("poincare4").unwrap();
        assert_eq!(bracket_named(&alg, "K2", "P0"), unit(&alg, "P2", 1));
        assert_eq!(bracket_named(&alg, "K2", "P2"), unit(&alg, "P0", 1));
        assert_eq!(bracket_named(&alg, "K1", "K2"), unit(&alg, "J3", -1));
    }
}
