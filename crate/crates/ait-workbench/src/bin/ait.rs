fn main() {
    std::process::exit(ait_workbench::harness::dispatch(std::env::args_os()));
}
