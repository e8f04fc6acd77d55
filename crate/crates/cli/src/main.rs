fn main() {
    match frobkit_cli::execute(std::env::args_os()) {
        Ok(report) => print!("{report}{}", if report.ends_with('\n') { "" } else { "\n" }),
        Err(failure) => {
            eprintln!("{}", failure.message);
            std::process::exit(failure.code);
        }
    }
}
