use super::{
    degenerate, solve_identical_subadditive, solve_marginal_witness, solve_nonneg_submodular, solve_nonnegative,
    solve_two_agents, IdenticalSubadditive, MarginalWitness, NonnegSubmodular, Nonnegative, SolveError, SolveOptions,
    SolveResult, Solver, TwoAgents,
};
use crate::valuation::{grand_bundle_sign, Class, GrandBundleSign, Instance, Valuations};

/// Picks an algorithm from the grand-bundle sign and the declared classes.
pub struct Dispatch;

impl Dispatch {
    pub const NAME: &'static str = "auto";

    /// Name of the solver [`solve_dispatch`] would run on a nonnegative instance.
    pub fn route(instance: &Instance) -> Result<&'static str, SolveError> {
        let n = instance.agents();
        if n == 2 {
            return Ok(TwoAgents::NAME);
        }
        let all = |c| instance.all_declare(c);
        if all(Class::Nonnegative) && all(Class::Submodular) && instance.items() >= n {
            return Ok(NonnegSubmodular::NAME);
        }
        let witness_class = instance
            .specs()
            .iter()
            .all(|s| s.declares(Class::Submodular) || s.declares(Class::DoublyMonotone));
        if witness_class {
            return Ok(MarginalWitness::NAME);
        }
        if all(Class::Nonnegative) {
            return Ok(Nonnegative::NAME);
        }
        if instance.is_identical() && all(Class::Subadditive) {
            return Ok(IdenticalSubadditive::NAME);
        }
        Err(SolveError::NotApplicable(format!(
            "{n} agents with classes {}; general valuations may admit no EQ1 allocation",
            instance
                .specs()
                .iter()
                .map(|s| s.classes().to_string())
                .collect::<Vec<_>>()
                .join(" ")
        )))
    }
}

impl Solver for Dispatch {
    fn name(&self) -> &'static str {
        Self::NAME
    }

    fn description(&self) -> &'static str {
        "route by grand-bundle sign and declared classes; negate nonpositive instances"
    }

    fn check(&self, instance: &Instance) -> Result<(), SolveError> {
        if instance.items() == 0 || instance.agents() == 1 {
            return Ok(());
        }
        match grand_bundle_sign(instance) {
            GrandBundleSign::Mixed { positive, negative } => Err(SolveError::MixedSigns { positive, negative }),
            GrandBundleSign::AllNonneg => match Dispatch::route(instance) {
                Err(e) if !all_zero(instance) => Err(e),
                Err(e) => Dispatch::route(&instance.negated()).map(|_| ()).map_err(|_| e),
                Ok(_) => Ok(()),
            },
            GrandBundleSign::AllNonpos => Dispatch::route(&instance.negated()).map(|_| ()),
        }
    }

    fn solve(&self, instance: &Instance, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
        solve_dispatch(instance, opts)
    }
}

/// Solves any instance whose agents agree on the sign of the grand bundle and
/// whose declared classes match an algorithm. Nonpositive instances are
/// negated, solved, and returned without a witness: EQ1 survives negation but
/// a lower witness of `−v` says nothing about `v`.
pub fn solve_dispatch(instance: &Instance, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    if let Some(result) = degenerate(instance, Dispatch::NAME) {
        return Ok(result);
    }
    match grand_bundle_sign(instance) {
        GrandBundleSign::Mixed { positive, negative } => Err(SolveError::MixedSigns { positive, negative }),
        GrandBundleSign::AllNonneg => match Dispatch::route(instance) {
            Ok(name) => run(name, instance, opts),
            // With every v_i(M) = 0 both orientations qualify; the negated
            // classes may match where the declared ones do not.
            Err(e) if all_zero(instance) => match Dispatch::route(&instance.negated()) {
                Ok(_) => via_negation(instance, opts),
                Err(_) => Err(e),
            },
            Err(e) => Err(e),
        },
        GrandBundleSign::AllNonpos => via_negation(instance, opts),
    }
}

fn all_zero(instance: &Instance) -> bool {
    let full = instance.full();
    (0..instance.agents()).all(|i| instance.value(i, full).is_zero())
}

fn via_negation(instance: &Instance, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    let negated = instance.negated();
    let mut result = run(Dispatch::route(&negated)?, &negated, opts)?;
    result.solver = format!("negated {}", result.solver);
    result.witness = None;
    Ok(result)
}

fn run(name: &'static str, instance: &Instance, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    match name {
        TwoAgents::NAME => solve_two_agents(instance, opts),
        NonnegSubmodular::NAME => solve_nonneg_submodular(instance, opts),
        MarginalWitness::NAME => solve_marginal_witness(instance, opts),
        Nonnegative::NAME => solve_nonnegative(instance, opts),
        IdenticalSubadditive::NAME => solve_identical_subadditive(instance, opts),
        other => unreachable!("route returned unknown solver {other}"),
    }
}
