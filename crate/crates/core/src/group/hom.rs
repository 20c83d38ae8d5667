use super::{FiniteGroup, Subgroup};
use crate::error::{Error, Result};
use crate::radix;

fn check_map(f: &[usize], dom: &FiniteGroup, cod: &FiniteGroup) -> Result<()> {
    if f.len() != dom.order() {
        return Err(Error::domain(format!(
            "map defines {} values but the domain has {} elements",
            f.len(),
            dom.order()
        )));
    }
    if let Some(&bad) = f.iter().find(|&&v| v >= cod.order()) {
        return Err(Error::domain(format!(
            "map value {bad} is outside a codomain of order {}",
            cod.order()
        )));
    }
    Ok(())
}

/// Exhaustive check of `f(a·b) = f(a)·f(b)` over all pairs. `f[a]` is the
/// image of element id `a`.
pub fn is_homomorphism(f: &[usize], dom: &FiniteGroup, cod: &FiniteGroup) -> Result<bool> {
    check_map(f, dom, cod)?;
    Ok(dom.elements().all(|a| {
        dom.elements()
            .all(|b| f[dom.op(a, b)] == cod.op(f[a], f[b]))
    }))
}

/// Exact check that exploits a direct-product domain. A map on
/// `G_1 × ... × G_k` is a homomorphism iff its restriction to each factor is
/// one, the images of different factors commute, and
/// `f(x) = f_1(x_1)·...·f_k(x_k)`. Non-product domains fall back to the
/// exhaustive check.
pub fn is_homomorphism_by_factors(
    f: &[usize],
    dom: &FiniteGroup,
    cod: &FiniteGroup,
) -> Result<bool> {
    check_map(f, dom, cod)?;
    let Some(factors) = dom.factors() else {
        return is_homomorphism(f, dom, cod);
    };
    let k = factors.len();
    let id_parts: Vec<usize> = factors.iter().map(FiniteGroup::identity).collect();

    let mut restrictions: Vec<Vec<usize>> = Vec::with_capacity(k);
    for (i, fac) in factors.iter().enumerate() {
        let mut parts = id_parts.clone();
        let r: Vec<usize> = fac
            .elements()
            .map(|a| {
                parts[i] = a;
                f[dom.from_components(&parts).expect("valid components")]
            })
            .collect();
        if !is_homomorphism_by_factors(&r, fac, cod)? {
            return Ok(false);
        }
        restrictions.push(r);
    }

    for i in 0..k {
        for j in i + 1..k {
            for &a in &restrictions[i] {
                for &b in &restrictions[j] {
                    if cod.op(a, b) != cod.op(b, a) {
                        return Ok(false);
                    }
                }
            }
        }
    }

    // f(x) = f(x') · r_j(x_j) where j is the lowest nonzero digit of x and
    // x' is x with that digit cleared.
    if f[0] != cod.identity() {
        return Ok(false);
    }
    let radices: Vec<usize> = factors.iter().map(FiniteGroup::order).collect();
    let mut places = vec![1; k];
    for j in (0..k.saturating_sub(1)).rev() {
        places[j] = places[j + 1] * radices[j + 1];
    }
    let mut parts = vec![0; k];
    for (x, &fx) in f.iter().enumerate().skip(1) {
        radix::increment(&mut parts, &radices);
        let j = parts
            .iter()
            .rposition(|&d| d != 0)
            .expect("nonzero element");
        let prev = x - parts[j] * places[j];
        if cod.op(f[prev], restrictions[j][parts[j]]) != fx {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Preimage of the codomain identity.
pub fn kernel(f: &[usize], dom: &FiniteGroup, cod: &FiniteGroup) -> Result<Subgroup> {
    if !is_homomorphism_by_factors(f, dom, cod)? {
        return Err(Error::precondition("map is not a homomorphism"));
    }
    let e = cod.identity();
    let members: Vec<usize> = dom.elements().filter(|&a| f[a] == e).collect();
    Subgroup::new(dom, &members)
}

/// Sorted distinct values of `f`.
pub fn image(f: &[usize]) -> Vec<usize> {
    let mut v = f.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// `fibers[v]` lists the domain ids mapped to `v`, for `v < cod_order`.
pub fn fibers(f: &[usize], cod_order: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); cod_order];
    for (a, &v) in f.iter().enumerate() {
        out[v].push(a);
    }
    out
}

/// True iff every nonempty fiber of `f` is a left coset of `ker`.
pub fn fibers_are_kernel_cosets(f: &[usize], ker: &Subgroup) -> bool {
    fibers(f, f.iter().max().map_or(0, |m| m + 1))
        .iter()
        .filter(|fib| !fib.is_empty())
        .all(|fib| ker.left_coset_of(fib[0]) == *fib)
}
