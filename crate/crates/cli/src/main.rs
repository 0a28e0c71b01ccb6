use std::process::ExitCode;

fn main() -> ExitCode {
    let result = stackedcc_cli::run(std::env::args_os());
    println!("{}", serde_json::to_string_pretty(&result.payload).expect("payload serializes"));
    eprintln!("{}", result.human_summary);
    ExitCode::from(result.exit_code() as u8)
}
