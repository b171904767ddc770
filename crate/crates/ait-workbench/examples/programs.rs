//! Parse a register-machine program, run it, and number it.

use ait_workbench::codec::Nat;
use ait_workbench::langvm::{parse_program, program_from_number, program_number, run, stock, Outcome};

fn main() {
    let add = parse_program(stock::ADDITION).expect("stock program parses");
    println!("addition expands to {} instructions:\n{add}", add.len());
    match run(&add, &[Nat::from(3u32), Nat::from(4u32)], 100_000) {
        Outcome::Halted { output, steps } => println!("3 + 4 = {output} in {steps} steps"),
        Outcome::OutOfBudget => println!("ran out of steps"),
    }

    let forever = parse_program(stock::FOREVER).unwrap();
    println!("#(FOREVER) = {}", program_number(&forever));
    println!("FOREVER on 0 within 10^6 steps: {:?}", run(&forever, &[Nat::from(0u32)], 1_000_000));

    // every natural number names some program
    for n in [0u32, 1, 2, 1023] {
        println!("program {n}:\n{}", program_from_number(&Nat::from(n)));
    }
}
