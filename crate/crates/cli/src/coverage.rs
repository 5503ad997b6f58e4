//! Which subcommand exercises each library operation.

/// `(operation, subcommand)`; every operation appears exactly once.
pub const COVERAGE: &[(&str, &str)] = &[
    ("parse_expr", "pair"),
    ("eval", "pair"),
    ("differentiate", "pair"),
    ("embed_real_analytic", "pair"),
    ("delta_derivative", "pair"),
    ("pair", "pair"),
    ("standardize", "pair"),
    ("integrate_line", "pair"),
    ("tail_bound", "pair"),
    ("verify_growth", "pair"),
    ("moment", "moments"),
    ("taylor_of_ft", "moments"),
    ("asymptotic_sum", "expand"),
    ("parametric_order_check", "param-check"),
    ("scale_pair", "param-check"),
    ("fourier_transform", "fourier"),
    ("inverse_fourier", "invfourier"),
    ("realize_moments", "realize"),
    ("build_multiplier", "multiplier"),
    ("apply_local_operator", "multiplier"),
    ("structural_representation", "structural"),
    ("radon_transform", "radon"),
    ("radon_via_fourier", "radon"),
    ("integrate_box", "radon"),
    ("helgason_moment", "helgason"),
    ("radon_asymptotic_sum", "radon-expand"),
    ("gevrey_probe", "gevrey"),
    ("support_check", "support-check"),
    ("apply_operator", "ode-solve"),
    ("solve_series", "ode-solve"),
    ("assemble", "ode-solve"),
    ("residual_check", "ode-solve"),
    ("run", "verify-all"),
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commands::COMMANDS;
    use std::collections::HashSet;

    #[test]
    fn each_operation_maps_to_one_existing_command() {
        let mut seen = HashSet::new();
        for (op, cmd) in COVERAGE {
            assert!(seen.insert(*op), "{op} listed twice");
            assert!(COMMANDS.contains(cmd), "{op} maps to unknown command {cmd}");
        }
    }

    #[test]
    fn every_command_covers_something() {
        for cmd in COMMANDS {
            assert!(COVERAGE.iter().any(|(_, c)| c == cmd), "{cmd} covers no operation");
        }
    }
}
