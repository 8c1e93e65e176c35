//! Server bin packing: first-fit-decreasing placement of VNF demands and an
//! exact minimal-server packer used by the exact solver.

/// Orders VNF demands for first-fit-decreasing: by demand descending, ties by
/// original index ascending.
fn decreasing_order(demands: &[u32]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..demands.len()).collect();
    order.sort_by(|&i, &j| demands[j].cmp(&demands[i]).then(i.cmp(&j)));
    order
}

/// First-fit-decreasing of `demands` into servers with the given residual
/// `free` capacities. Servers already carrying load are scanned before idle
/// ones (both groups by index), so activated servers are reused before new
/// ones are opened. Server indices in `exclude` are never used.
///
/// Returns the per-demand server index, or `None` if some demand cannot fit.
/// Does not mutate `free`.
pub fn ffd_fit(
    demands: &[u32],
    free: &[u32],
    active: &[bool],
    exclude: &[usize],
) -> Option<Vec<usize>> {
    let mut scan: Vec<usize> = (0..free.len())
        .filter(|s| !exclude.contains(s) && active[*s])
        .collect();
    scan.extend((0..free.len()).filter(|s| !exclude.contains(s) && !active[*s]));

    let mut residual: Vec<u32> = free.to_vec();
    let mut assignment = vec![usize::MAX; demands.len()];
    for i in decreasing_order(demands) {
        let server = scan.iter().copied().find(|&s| residual[s] >= demands[i])?;
        residual[server] -= demands[i];
        assignment[i] = server;
    }
    Some(assignment)
}

/// Outcome of [`min_servers`]: server count, per-demand server assignment,
/// and whether the count is provably minimal (false only if the feasibility
/// search hit its node budget along the way).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packing {
    pub servers_used: usize,
    pub assignment: Vec<usize>,
    pub proven_minimal: bool,
}

/// Why [`min_servers`] produced no packing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PackFailure {
    /// The demands provably do not fit, even using every server.
    Infeasible,
    /// The feasibility search hit its node budget before reaching a verdict.
    Unknown,
}

const FIT_NODE_BUDGET: u64 = 200_000;

/// Exact minimal-server packing of `demands` into servers with capacities
/// `capacities` (full, unloaded).
///
/// Branch and bound over items in decreasing order, bounded below by the
/// capacity-prefix argument and above by first-fit-decreasing. FFD failing is
/// not proof of infeasibility, so every server count up to the full set is
/// searched before giving up.
pub fn min_servers(demands: &[u32], capacities: &[u32]) -> Result<Packing, PackFailure> {
    if demands.is_empty() {
        return Ok(Packing {
            servers_used: 0,
            assignment: Vec::new(),
            proven_minimal: true,
        });
    }
    // Prefer large servers; order is (capacity desc, index asc) so the
    // result is deterministic for homogeneous facilities.
    let mut server_order: Vec<usize> = (0..capacities.len()).collect();
    server_order.sort_by(|&a, &b| capacities[b].cmp(&capacities[a]).then(a.cmp(&b)));

    let total: u64 = demands.iter().map(|&d| d as u64).sum();
    let max_demand = *demands.iter().max().unwrap();
    if capacities.iter().max().is_none_or(|&c| max_demand > c) {
        return Err(PackFailure::Infeasible);
    }

    // Smallest q such that the q largest servers can hold the total load.
    let mut lower = 0usize;
    let mut acc = 0u64;
    while acc < total {
        let Some(&s) = server_order.get(lower) else {
            return Err(PackFailure::Infeasible);
        };
        acc += capacities[s] as u64;
        lower += 1;
    }

    // FFD upper bound over servers in preference order. Bins form a prefix
    // because capacities are scanned in decreasing order. FFD may fail even
    // when a packing exists.
    let order = decreasing_order(demands);
    let ffd_witness: Option<(usize, Vec<usize>)> = {
        let mut residual: Vec<u32> = server_order.iter().map(|&s| capacities[s]).collect();
        let mut assignment = vec![usize::MAX; demands.len()];
        let mut used = 0usize;
        let mut ok = true;
        for &i in &order {
            match (0..residual.len()).find(|&b| residual[b] >= demands[i]) {
                Some(b) => {
                    residual[b] -= demands[i];
                    assignment[i] = b;
                    used = used.max(b + 1);
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        ok.then_some((used, assignment))
    };

    // Try each server count from the lower bound up; the first feasible
    // count is optimal.
    let search_upper = match &ffd_witness {
        Some((used, _)) => *used, // FFD already witnesses this count
        None => server_order.len() + 1,
    };
    let mut proven = true;
    for q in lower..search_upper.min(server_order.len() + 1) {
        let caps: Vec<u32> = server_order[..q].iter().map(|&s| capacities[s]).collect();
        match fit_into(&order, demands, &caps) {
            FitOutcome::Fits(bins) => {
                return Ok(Packing {
                    servers_used: q,
                    assignment: bins.iter().map(|&b| server_order[b]).collect(),
                    proven_minimal: proven,
                })
            }
            FitOutcome::NoFit => {}
            FitOutcome::BudgetExhausted => proven = false,
        }
    }
    match ffd_witness {
        Some((used, assignment)) => Ok(Packing {
            servers_used: used,
            assignment: assignment.iter().map(|&b| server_order[b]).collect(),
            proven_minimal: proven,
        }),
        None if proven => Err(PackFailure::Infeasible),
        None => Err(PackFailure::Unknown),
    }
}

enum FitOutcome {
    Fits(Vec<usize>),
    NoFit,
    BudgetExhausted,
}

/// Depth-first feasibility check: can all demands (visited in `order`) fit
/// into bins with the given capacities? Prunes branches that put an item into
/// more than one bin of identical residual.
fn fit_into(order: &[usize], demands: &[u32], caps: &[u32]) -> FitOutcome {
    fn rec(
        pos: usize,
        order: &[usize],
        demands: &[u32],
        residual: &mut [u32],
        out: &mut [usize],
        budget: &mut u64,
    ) -> bool {
        let Some(&item) = order.get(pos) else {
            return true;
        };
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let d = demands[item];
        let mut tried: Vec<u32> = Vec::with_capacity(residual.len());
        for b in 0..residual.len() {
            if residual[b] < d || tried.contains(&residual[b]) {
                continue;
            }
            tried.push(residual[b]);
            residual[b] -= d;
            out[item] = b;
            if rec(pos + 1, order, demands, residual, out, budget) {
                return true;
            }
            residual[b] += d;
        }
        false
    }

    let mut residual = caps.to_vec();
    let mut out = vec![usize::MAX; demands.len()];
    let mut budget = FIT_NODE_BUDGET;
    if rec(0, order, demands, &mut residual, &mut out, &mut budget) {
        FitOutcome::Fits(out)
    } else if budget == 0 {
        FitOutcome::BudgetExhausted
    } else {
        FitOutcome::NoFit
    }
}
