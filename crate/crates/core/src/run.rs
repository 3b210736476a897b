//! Per-sample run records shared by the linear and kernel filter drivers.

use std::io::{self, Write};

use crate::kernels::KernelSpec;
use crate::signal_io::SignalBuffer;

/// Output of driving one filter over a whole signal: per-step outputs and
/// errors plus final-state summaries. Linear runs carry final weights; kernel
/// runs carry dictionary statistics instead.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterRun {
    pub outputs: Vec<f64>,
    pub errors: Vec<f64>,
    pub final_weights: Option<Vec<f64>>,
    pub dictionary_size: Option<usize>,
    pub coeff_l1_norm: Option<f64>,
    pub kernel: Option<KernelSpec>,
}

impl FilterRun {
    /// Writes the per-step record as CSV with header `k,y,e` and 1-based k.
    /// Kernel runs append a final-state summary line.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "k,y,e")?;
        for (k, (y, e)) in self.outputs.iter().zip(&self.errors).enumerate() {
            writeln!(w, "{},{},{}", k + 1, y, e)?;
        }
        if let (Some(size), Some(kernel), Some(l1)) =
            (self.dictionary_size, self.kernel, self.coeff_l1_norm)
        {
            writeln!(w, "# dictionary_size={size} kernel={kernel} coeff_l1_norm={l1}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = Vec::new();
        self.write_csv(&mut out).expect("writing to a Vec cannot fail");
        String::from_utf8(out).expect("CSV output is always UTF-8")
    }

    /// Filter outputs as a signal at the given rate.
    pub fn output_signal(&self, sample_rate_hz: u32) -> SignalBuffer {
        SignalBuffer { samples: self.outputs.clone(), sample_rate_hz }
    }

    /// Per-step errors as a signal at the given rate.
    pub fn error_signal(&self, sample_rate_hz: u32) -> SignalBuffer {
        SignalBuffer { samples: self.errors.clone(), sample_rate_hz }
    }
}
