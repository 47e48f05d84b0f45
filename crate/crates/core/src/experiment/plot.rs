//! Generated gnuplot scripts. Each script is self-contained: run
//! `gnuplot <script>` in the output directory with no arguments and it
//! renders a PNG next to the CSVs it references.

fn preamble(output_png: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set key autotitle columnhead\n\
         set terminal pngcairo size 1000,700\n\
         set output '{output_png}'\n"
    )
}

pub fn histogram_script(csv: &str, title: &str, output_png: &str) -> String {
    let mut s = preamble(output_png);
    s.push_str(&format!(
        "set title '{title}'\n\
         set xlabel 'observable value'\n\
         set ylabel 'population'\n\
         plot '{csv}' using 1:2 with impulses lw 2 title 'N_i'\n"
    ));
    s
}

pub fn sweep_script(csv: &str, bits: &[usize], output_png: &str) -> String {
    let mut s = preamble(output_png);
    s.push_str(
        "set logscale x\n\
         set xlabel 'T'\n\
         set ylabel 'N_0 / N'\n\
         set yrange [0:1.05]\n\
         plot \\\n",
    );
    let mut lines = Vec::new();
    for &m in bits {
        lines.push(format!(
            "  '{csv}' using (column('T')):(column('M')=={m} ? column('n0_b') : 1/0) \
             with lines title 'B-model M={m}'"
        ));
        lines.push(format!(
            "  '{csv}' using (column('T')):(column('M')=={m} ? column('n0_c_exact') : 1/0) \
             with lines dt 2 title 'C-model M={m}'"
        ));
    }
    s.push_str(&lines.join(", \\\n"));
    s.push('\n');
    s
}

/// Overlay of empirical markers and theory lines for a set of
/// temperatures, plotted against the centered deviation (value - mean).
pub fn comparison_script(
    output_png: &str,
    pairs: &[(String, String, String)], // (hist csv, theory csv, label)
) -> String {
    let mut s = preamble(output_png);
    s.push_str(
        "set xlabel 'value - mean'\n\
         set ylabel 'population'\n\
         plot \\\n",
    );
    let mut lines = Vec::new();
    for (hist, theory, label) in pairs {
        lines.push(format!(
            "  '{theory}' using 2:3 with lines title 'theory {label}'"
        ));
        lines.push(format!(
            "  '{hist}' using 2:3 with points pt 7 title 'ensemble {label}'"
        ));
    }
    s.push_str(&lines.join(", \\\n"));
    s.push('\n');
    s
}
