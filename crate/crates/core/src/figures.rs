//! Command lines that regenerate the data behind each figure.

pub struct Figure {
    pub id: &'static str,
    pub caption: &'static str,
    pub args: &'static [&'static str],
}

pub const FIGURES: [Figure; 5] = [
    Figure {
        id: "fig1",
        caption: "completeness weight w(t), t = |z|², for lambda = 3/2 and r = 2, 3, 4",
        args: &["measure", "--lambda", "1.5", "--r", "2,3,4", "--steps", "200"],
    },
    Figure {
        id: "fig2",
        caption: "r = 1 squeezing factors over |z|² in (0, 0.96] for five phases",
        args: &[
            "squeeze",
            "--lambda=-0.25,0.25,1",
            "--r",
            "1",
            "--phi",
            "0,pi/6,pi/4,pi/3,pi/2",
            "--zsq-max",
            "0.96",
            "--steps",
            "48",
        ],
    },
    Figure {
        id: "fig3",
        caption: "squeezing factors at phase 0 for r = 3, 4, 5",
        args: &[
            "squeeze",
            "--lambda=-0.25,0.25,1",
            "--r",
            "3,4,5",
            "--phi",
            "0",
            "--zsq-max",
            "16",
            "--steps",
            "64",
        ],
    },
    Figure {
        id: "fig4",
        caption: "squeezing factors at r = 4 for five phases",
        args: &[
            "squeeze",
            "--lambda=-0.25,0.25,1",
            "--r",
            "4",
            "--phi",
            "0,pi/6,pi/4,pi/3,pi/2",
            "--zsq-max",
            "16",
            "--steps",
            "64",
        ],
    },
    Figure {
        id: "fig5",
        caption: "g2 and Mandel Q at lambda = 0 for r = 2, 3, 4, 5",
        args: &["stats", "--lambda", "0", "--r", "2,3,4,5", "--zsq-max", "20", "--steps", "80"],
    },
];
