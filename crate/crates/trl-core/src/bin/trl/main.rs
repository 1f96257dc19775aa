fn main() {
    // CLI wired up after the library settles.
    eprintln!("trl: not yet wired");
    std::process::exit(2);
}
