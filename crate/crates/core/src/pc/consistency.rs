use std::fmt;

use super::presentation::{Collector, PcPresentation};

/// The first overlap whose two collected forms disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Overlap {
    pub description: String,
    pub left: Option<Vec<i64>>,
    pub right: Option<Vec<i64>>,
}

impl fmt::Display for Overlap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.left, &self.right) {
            (Some(l), Some(r)) => write!(f, "{}: {:?} != {:?}", self.description, l, r),
            _ => write!(f, "{}", self.description),
        }
    }
}

fn unit(n: usize, k: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[k] = 1;
    v
}

impl PcPresentation {
    /// Runs the standard overlap tests (indices as `k > j > i`):
    ///
    /// * `(g_k g_j) g_i = g_k (g_j g_i)`
    /// * `(g_j^{o_j}) g_i = g_j^{o_j - 1} (g_j g_i)` for finite `o_j`
    /// * `g_j (g_i^{o_i}) = (g_j g_i) g_i^{o_i - 1}` for finite `o_i`
    /// * `(g_i^{o_i}) g_i = g_i (g_i^{o_i})` for finite `o_i`
    /// * `(g_j g_i^-1) g_i = g_j` and `(g_j g_i) g_i^-1 = g_j` for infinite `o_i`
    pub fn consistency_check(&self) -> Result<(), Overlap> {
        let n = self.len();
        let d = self.data();
        let orders = d.orders.clone();
        let run = |desc: String, f: &dyn Fn(&mut Collector) -> crate::Result<(Vec<i64>, Vec<i64>)>| {
            let mut col = self.collector();
            match f(&mut col) {
                Ok((l, r)) if l == r => Ok(()),
                Ok((l, r)) => Err(Overlap { description: desc, left: Some(l), right: Some(r) }),
                Err(e) => Err(Overlap { description: format!("{desc}: {e}"), left: None, right: None }),
            }
        };
        let name = |i: usize| d.names[i].as_str();
        for k in 0..n {
            for j in 0..k {
                for i in 0..j {
                    run(
                        format!("({} {}) {} = {} ({} {})", name(k), name(j), name(i), name(k), name(j), name(i)),
                        &|c| {
                            let mut l = unit(n, k);
                            c.mul_gen_pow(&mut l, j, 1)?;
                            c.mul_gen_pow(&mut l, i, 1)?;
                            let mut ji = unit(n, j);
                            c.mul_gen_pow(&mut ji, i, 1)?;
                            let r = c.mul(&unit(n, k), &ji)?;
                            Ok((l, r))
                        },
                    )?;
                }
            }
        }
        for j in 0..n {
            for i in 0..j {
                if let Some(oj) = orders[j] {
                    run(
                        format!("({}^{oj}) {} = {}^{} ({} {})", name(j), name(i), name(j), oj - 1, name(j), name(i)),
                        &|c| {
                            let l = c.mul(d.powers[j].exponents(), &unit(n, i))?;
                            let mut r = vec![0; n];
                            r[j] = oj as i64 - 1;
                            let mut ji = unit(n, j);
                            c.mul_gen_pow(&mut ji, i, 1)?;
                            c.mul_into(&mut r, &ji)?;
                            Ok((l, r))
                        },
                    )?;
                }
                if let Some(oi) = orders[i] {
                    run(
                        format!("{} ({}^{oi}) = ({} {}) {}^{}", name(j), name(i), name(j), name(i), name(i), oi - 1),
                        &|c| {
                            let l = c.mul(&unit(n, j), d.powers[i].exponents())?;
                            let mut r = unit(n, j);
                            c.mul_gen_pow(&mut r, i, 1)?;
                            c.mul_gen_pow(&mut r, i, oi as i64 - 1)?;
                            Ok((l, r))
                        },
                    )?;
                } else {
                    run(format!("({} {}^-1) {} = {}", name(j), name(i), name(i), name(j)), &|c| {
                        let mut l = unit(n, j);
                        c.mul_gen_pow(&mut l, i, -1)?;
                        c.mul_gen_pow(&mut l, i, 1)?;
                        Ok((l, unit(n, j)))
                    })?;
                    run(format!("({} {}) {}^-1 = {}", name(j), name(i), name(i), name(j)), &|c| {
                        let mut l = unit(n, j);
                        c.mul_gen_pow(&mut l, i, 1)?;
                        c.mul_gen_pow(&mut l, i, -1)?;
                        Ok((l, unit(n, j)))
                    })?;
                }
            }
        }
        for i in 0..n {
            if let Some(oi) = orders[i] {
                run(format!("({}^{oi}) {} = {} ({}^{oi})", name(i), name(i), name(i), name(i)), &|c| {
                    let w = d.powers[i].exponents().to_vec();
                    let l = c.mul(&w, &unit(n, i))?;
                    let r = c.mul(&unit(n, i), &w)?;
                    Ok((l, r))
                })?;
            }
        }
        Ok(())
    }

    pub fn is_consistent(&self) -> bool {
        self.consistency_check().is_ok()
    }
}
