use std::process::ExitCode;

fn main() -> ExitCode {
    // Die quietly when the output pipe closes (e.g. `foweno list | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let args: Vec<String> = std::env::args().collect();
    ExitCode::from(foweno::cli::run(&args) as u8)
}
