//! Drives the command-line front end in-process to produce CSV and JSON.

fn main() {
    let runs: [&[&str]; 4] = [
        &["table", "--fn", "gamma_pq", "--lo", "1", "--hi", "2", "--count", "5", "--p", "2", "--q", "0.5"],
        &["eval", "--fn", "psi_pq_deriv", "--x", "0.7", "--p", "5", "--q", "0.9", "--n", "2", "--format", "json"],
        &["verify", "cm-psi-prime", "--p", "3", "--q", "0.5"],
        &["limits", "p-gamma", "--x", "0.5", "--ladder", "100,1000,10000"],
    ];
    for args in runs {
        println!("$ pqgamma {}", args.join(" "));
        let argv = std::iter::once("pqgamma").chain(args.iter().copied());
        let code = pqgamma::cli::run(argv, &mut std::io::stdout(), &mut std::io::stderr());
        println!("(exit {code})\n");
    }
}
