use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let report = coarsekit_cli::run(&argv);
    let text = report.render();
    let code = report.exit_code();
    if code == 2 {
        eprint!("{text}");
    } else {
        let mut out = std::io::stdout().lock();
        let _ = out.write_all(text.as_bytes());
    }
    ExitCode::from(code as u8)
}
