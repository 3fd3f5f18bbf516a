fn main() {
    std::process::exit(morselab::main_with(std::env::args_os()));
}
