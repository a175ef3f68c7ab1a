// placeholder main
fn main() {}
