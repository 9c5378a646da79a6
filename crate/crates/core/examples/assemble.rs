// Assemble a small program, print its hex image and disassemble it again.

use rvmurac::asm::{assemble, disassemble, SourceProgram};
use rvmurac::image::MemoryImage;

const SOURCE: &str = "
# sum 1..=10 into a0
    li t0, 10
    li a0, 0
loop:
    add a0, a0, t0
    addi t0, t0, -1
    bne t0, zero, loop
    sw a0, 0x40(zero)
    baa 0x80(zero)
    ebreak
";

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let image = assemble(&SourceProgram::new(SOURCE))?;
    println!("loop label at 0x{:x}", image.symbol("loop").unwrap());
    let hex = image.to_hex();
    print!("{hex}");

    let reloaded = MemoryImage::from_hex(&hex)?;
    assert_eq!(reloaded.words, image.words);
    print!("{}", disassemble(&reloaded));

    // Diagnostics carry the source line.
    let err = assemble(&SourceProgram::new("nop\nbeq x1, x2, nowhere")).unwrap_err();
    println!("error: {err}");
    assert_eq!(err.line, 2);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
