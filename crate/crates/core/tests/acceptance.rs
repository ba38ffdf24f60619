// Runs the acceptance criteria at their stated tolerances and runtime
// budgets, printing one line per criterion. Plain `main` so the summary is
// always visible in `cargo test` output.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use isosusy::verify::{self, Check, VerifyOptions};

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Duration,
    run: fn(&VerifyOptions) -> Vec<Check>,
}

fn c1(o: &VerifyOptions) -> Vec<Check> {
    vec![verify::exact_half_line_b0(o)]
}

fn c2(o: &VerifyOptions) -> Vec<Check> {
    verify::half_line_series(o)
}

fn c3(o: &VerifyOptions) -> Vec<Check> {
    verify::box_series(o)
}

fn c4(o: &VerifyOptions) -> Vec<Check> {
    vec![verify::oscillator_recovery(o)]
}

fn c5(o: &VerifyOptions) -> Vec<Check> {
    verify::specfun_suite(o)
}

fn c6(o: &VerifyOptions) -> Vec<Check> {
    verify::isotonic_states(o)
}

fn c7(o: &VerifyOptions) -> Vec<Check> {
    verify::a_invariance(o)
}

fn c8(o: &VerifyOptions) -> Vec<Check> {
    verify::spectra_2d(o)
}

fn c9(o: &VerifyOptions) -> Vec<Check> {
    verify::formal_algebra(o)
}

fn c10(o: &VerifyOptions) -> Vec<Check> {
    let mut v = verify::figure_data(o);
    // monotonicity is also confirmed by the oracle at three barrier positions
    v.extend(
        verify::spectra_oracle_agreement(o)
            .into_iter()
            .filter(|c| c.name.contains("half-line")),
    );
    v
}

fn c11(o: &VerifyOptions) -> Vec<Check> {
    verify::oracle_self_test(o)
}

const CRITERIA: [Criterion; 11] = [
    Criterion {
        id: 1,
        title: "exact b=0 half-line spectrum",
        budget: Duration::from_secs(5),
        run: c1,
    },
    Criterion {
        id: 2,
        title: "half-line small-b series",
        budget: Duration::from_secs(30),
        run: c2,
    },
    Criterion {
        id: 3,
        title: "box series and particle-in-box limit",
        budget: Duration::from_secs(30),
        run: c3,
    },
    Criterion {
        id: 4,
        title: "oscillator recovery for a distant barrier",
        budget: Duration::from_secs(10),
        run: c4,
    },
    Criterion {
        id: 5,
        title: "special functions",
        budget: Duration::from_secs(20),
        run: c5,
    },
    Criterion {
        id: 6,
        title: "isospectrality and state quality on R2, R3",
        budget: Duration::from_secs(60),
        run: c6,
    },
    Criterion {
        id: 7,
        title: "invariance under a",
        budget: Duration::from_secs(20),
        run: c7,
    },
    Criterion {
        id: 8,
        title: "2D spectra",
        budget: Duration::from_secs(120),
        run: c8,
    },
    Criterion {
        id: 9,
        title: "formal ladder vs physical spectrum",
        budget: Duration::from_secs(10),
        run: c9,
    },
    Criterion {
        id: 10,
        title: "figure data",
        budget: Duration::from_secs(60),
        run: c10,
    },
    Criterion {
        id: 11,
        title: "oracle self-test",
        budget: Duration::from_secs(20),
        run: c11,
    },
];

fn main() -> ExitCode {
    let opts = VerifyOptions::default();
    let mut lines = Vec::new();
    let mut failed = 0;
    for c in &CRITERIA {
        let start = Instant::now();
        let checks = (c.run)(&opts);
        let elapsed = start.elapsed();
        for check in &checks {
            println!("    {check}");
        }
        let within = elapsed <= c.budget;
        let ok = within && checks.iter().all(|k| k.passed);
        if !ok {
            failed += 1;
        }
        let mut line = format!(
            "criterion {:>2} {}: {} ({:.1} s of {} s)",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            c.title,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
        if !within {
            line.push_str(" over budget");
        }
        println!("{line}");
        lines.push(line);
    }
    println!();
    for l in &lines {
        println!("{l}");
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
