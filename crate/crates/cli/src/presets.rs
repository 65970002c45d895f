//! Built-in experiment configurations.

use std::fmt::Write;

use crate::config::{ExperimentConfig, NList, NoiseConfig, OutputConfig, ProblemConfig, TruncationConfig};
use crate::datum::NAMED_FUNCTIONS;

pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub config: ExperimentConfig,
}

fn truncation(trial: &str, n_list: &str) -> TruncationConfig {
    TruncationConfig {
        trial: trial.into(),
        test: None,
        n_list: NList::Spec(n_list.into()),
        solver: "qr".into(),
        tol: 1e-10,
        solution_family: "min-norm".into(),
    }
}

fn problem(operator: &str, datum: &str, exact: Option<&str>) -> ProblemConfig {
    ProblemConfig {
        operator: operator.into(),
        datum: datum.into(),
        exact: exact.map(Into::into),
    }
}

fn noise(nu: &str) -> Option<NoiseConfig> {
    Some(NoiseConfig {
        sigma: "power:1,1".into(),
        g: "power:1,2".into(),
        nu: nu.into(),
    })
}

pub fn presets() -> Vec<Preset> {
    let plain = |problem, truncation| ExperimentConfig {
        problem,
        truncation,
        noise: None,
        output: OutputConfig::default(),
    };
    vec![
        Preset {
            name: "volterra-g1",
            summary: "Volterra operator on [0,1], datum x²/2, exact solution x (norm 1/√3)",
            config: plain(
                problem("volterra", "poly:0,0,0.5", Some("poly:0,1")),
                truncation("legendre", "2..=100"),
            ),
        },
        Preset {
            name: "volterra-g1-fourier",
            summary: "the Volterra problem in the complex Fourier basis",
            config: plain(
                problem("volterra", "poly:0,0,0.5", Some("poly:0,1")),
                truncation("fourier", "3,9,17,33,65,129"),
            ),
        },
        Preset {
            name: "mult-g2",
            summary: "multiplication by x on [1,2], datum x², exact solution x (norm √(7/3))",
            config: plain(
                problem("mult-x:1,2", "poly:0,0,1", Some("poly:0,1")),
                truncation("legendre", "2..=50"),
            ),
        },
        Preset {
            name: "shift-last-unit",
            summary: "right shift on ℓ²(ℕ) with zero datum and the family f̂ = e_N",
            config: ExperimentConfig {
                truncation: TruncationConfig {
                    solution_family: "e_N".into(),
                    ..truncation("canonical", "1..=40")
                },
                ..plain(problem("right-shift", "zero", Some("zero")), truncation("canonical", "1"))
            },
        },
        Preset {
            name: "noise-example-6.2",
            summary: "σ_n = 1/n, g_n = 1/n², ν_n = n^(-3/2): residual plateau at ζ(3)",
            config: ExperimentConfig {
                noise: noise("power:1,1.5"),
                ..plain(
                    problem("weighted-shift:power:1,1", "law:power:1,2", None),
                    truncation("svd", "0..=2000"),
                )
            },
        },
        Preset {
            name: "noise-fig1",
            summary: "σ_n = 1/n, g_n = 1/n², ν_n = 0.4 n^(-3/2): semiconvergence with minimum at N = 6",
            config: ExperimentConfig {
                noise: noise("power:0.4,1.5"),
                ..plain(
                    problem("weighted-shift:power:1,1", "law:power:1,2", None),
                    truncation("svd", "0..=200"),
                )
            },
        },
    ]
}

pub fn find(name: &str) -> Option<ExperimentConfig> {
    presets().into_iter().find(|p| p.name == name).map(|p| p.config)
}

/// Text printed by `list-presets`.
pub fn listing() -> String {
    let mut s = String::new();
    writeln!(s, "Experiment presets:").unwrap();
    for p in presets() {
        let c = &p.config;
        writeln!(s, "  {:<20} {}", p.name, p.summary).unwrap();
        let basis = if c.noise.is_some() { "closed-form noise series" } else { c.truncation.trial.as_str() };
        writeln!(
            s,
            "  {:<20} operator {}, datum {}, basis {}",
            "", c.problem.operator, c.problem.datum, basis
        )
        .unwrap();
    }
    writeln!(s, "\nOperators:").unwrap();
    for (spec, what) in [
        ("volterra", "(Vf)(x) = ∫₀ˣ f on L²[0,1]"),
        ("mult-x:A,B", "multiplication by x on L²[A,B]"),
        ("right-shift", "e_n ↦ e_{n+1} on ℓ²(ℕ)"),
        ("mult-seq:LAW", "diagonal multiplication by a_n on ℓ²(ℕ)"),
        ("weighted-shift:LAW", "e_n ↦ σ_n e_{n+1} on ℓ²(ℕ)"),
        ("weighted-shift-z:LAW", "e_n ↦ σ_|n| e_{n+1} on ℓ²(ℤ)"),
    ] {
        writeln!(s, "  {spec:<22} {what}").unwrap();
    }
    writeln!(s, "  LAW: power:S,E[,SHIFT] | geometric:S,R | const:C, joined by '+'").unwrap();
    writeln!(s, "\nBases:").unwrap();
    for (b, what) in [
        ("legendre", "orthonormal shifted Legendre polynomials"),
        ("fourier", "complex exponentials, modes 0, +1, -1, +2, ..."),
        ("canonical", "e_1, e_2, ... (or e_0, e_1, e_-1, ... on ℤ)"),
        ("svd", "exact singular systems (trial φ_n, test ψ_n)"),
        ("krylov", "orthonormalized g, Ag, A²g, ...; test 'image' (default) or 'krylov'"),
        ("adversarial", "test system making every truncation singular"),
    ] {
        writeln!(s, "  {b:<22} {what}").unwrap();
    }
    writeln!(s, "\nData and exact solutions:").unwrap();
    writeln!(s, "  zero | poly:C0,C1,... | basis-e:K | law:LAW").unwrap();
    for (name, f) in NAMED_FUNCTIONS {
        writeln!(s, "  func:{name:<17} {f}").unwrap();
    }
    writeln!(s, "\nNoise presets:").unwrap();
    for p in presets().iter().filter(|p| p.config.noise.is_some()) {
        let n = p.config.noise.as_ref().unwrap();
        writeln!(s, "  {:<20} sigma {}, g {}, nu {}", p.name, n.sigma, n.g, n.nu).unwrap();
    }
    s
}
