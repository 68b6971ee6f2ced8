//! Smallest circuit size and evolution time whose covering bound reaches the
//! Grassmannian lower bound, for chains of growing length. Prints CSV.

use reachbound::limits::{crossover_analysis, render_report, ReportFormat, Resource};

fn main() -> reachbound::Result<()> {
    for resource in [Resource::Circuit, Resource::Time] {
        let report = crossover_analysis(2, 2, 1e-3, 8, 12, resource)?;
        println!("# {}", resource.as_str());
        print!("{}", render_report(&report, ReportFormat::Csv));
        if let Some(fit) = &report.fit {
            println!("# log slope {:.4}, R^2 {:.5}", fit.log_slope, fit.r_squared);
        }
    }
    Ok(())
}
