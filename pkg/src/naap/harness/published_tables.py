"""Published result tables, transcribed as (mae, monotonicity, violations) per level.

Rows are keyed by algorithm label; each value lists the cells for epoch levels
0, 3, 6 and 9. The ablation table carries two rows per algorithm: all features
first, best subset second.
"""

from __future__ import annotations

LEVELS = (0, 3, 6, 9)

ABLATION = {
    '3-NN': (
        ((0.011, 0.908, 72), (0.008, 0.933, 52), (0.008, 0.944, 44), (0.008, 0.942, 45)),
        ((0.009, 0.938, 48), (0.004, 0.972, 22), (0.005, 0.982, 14), (0.004, 0.974, 20)),
    ),
    'Linear Regression (D=0.25)': (
        ((0.011, 0.931, 54), (0.008, 0.944, 44), (0.007, 0.944, 44), (0.006, 0.947, 41)),
        ((0.011, 0.932, 53), (0.006, 0.954, 36), (0.006, 0.962, 30), (0.006, 0.968, 25)),
    ),
    'Decision Tree': (
        ((0.009, 0.921, 62), (0.007, 0.927, 57), (0.007, 0.924, 59), (0.007, 0.929, 55)),
        ((0.007, 0.936, 50), (0.005, 0.964, 28), (0.004, 0.972, 22), (0.004, 0.979, 16)),
    ),
    'Gradient Boosting (N=200)': (
        ((0.005, 0.956, 34), (0.006, 0.96, 31), (0.006, 0.962, 30), (0.005, 0.949, 40)),
        ((0.005, 0.956, 34), (0.004, 0.983, 13), (0.004, 0.977, 18), (0.004, 0.983, 13)),
    ),
    'AdaBoost (N=100)': (
        ((0.009, 0.918, 64), (0.007, 0.95, 39), (0.006, 0.954, 36), (0.006, 0.956, 34)),
        ((0.008, 0.923, 60), (0.006, 0.964, 28), (0.006, 0.959, 32), (0.004, 0.963, 29)),
    ),
    'SVR (RBF kernel)': (
        ((0.01, 0.926, 58), (0.007, 0.938, 48), (0.006, 0.962, 30), (0.005, 0.958, 33)),
        ((0.008, 0.936, 50), (0.006, 0.967, 26), (0.004, 0.977, 18), (0.004, 0.978, 17)),
    ),
    'Random Forest (N=200)': (
        ((0.007, 0.944, 44), (0.005, 0.959, 32), (0.005, 0.963, 29), (0.005, 0.965, 27)),
        ((0.006, 0.951, 38), (0.004, 0.976, 19), (0.005, 0.972, 22), (0.004, 0.978, 17)),
    ),
}

BASELINE = {
    '1-NN': ((0.007, 0.928, 56), (0.004, 0.967, 26), (0.003, 0.982, 14), (0.005, 0.967, 26)),
    '3-NN': ((0.009, 0.938, 48), (0.004, 0.972, 22), (0.005, 0.982, 14), (0.004, 0.974, 20)),
    '5-NN': ((0.008, 0.938, 48), (0.004, 0.965, 27), (0.005, 0.978, 17), (0.005, 0.974, 20)),
    '7-NN': ((0.008, 0.94, 47), (0.005, 0.973, 21), (0.005, 0.978, 17), (0.006, 0.969, 24)),
    '9-NN': ((0.008, 0.935, 51), (0.005, 0.971, 23), (0.005, 0.978, 17), (0.006, 0.968, 25)),
    'Linear Regression': ((0.014, 0.926, 58), (0.008, 0.953, 37), (0.007, 0.962, 30), (0.006, 0.965, 27)),
    'Linear Regression (D=0.5)': ((0.013, 0.928, 56), (0.007, 0.954, 36), (0.006, 0.967, 26), (0.005, 0.963, 29)),
    'Linear Regression (D=0.25)': ((0.011, 0.932, 53), (0.006, 0.954, 36), (0.006, 0.962, 30), (0.006, 0.968, 25)),
    'Linear Regression (D=2)': ((0.014, 0.924, 59), (0.008, 0.949, 40), (0.007, 0.959, 32), (0.006, 0.962, 30)),
    'Linear Regression (Exp)': ((0.014, 0.915, 66), (0.009, 0.951, 38), (0.008, 0.969, 24), (0.007, 0.959, 32)),
    'Linear Regression (Log)': ((0.013, 0.928, 56), (0.007, 0.951, 38), (0.006, 0.967, 26), (0.006, 0.967, 26)),
    'Linear Regression (Sigmoid)': ((0.013, 0.928, 56), (0.007, 0.953, 37), (0.007, 0.962, 30), (0.006, 0.967, 26)),
    'Decision Tree': ((0.007, 0.936, 50), (0.005, 0.964, 28), (0.004, 0.972, 22), (0.004, 0.979, 16)),
    'Gradient Boosting (N=25)': ((0.007, 0.937, 49), (0.006, 0.967, 26), (0.005, 0.969, 24), (0.005, 0.969, 24)),
    'Gradient Boosting (N=50)': ((0.006, 0.949, 40), (0.005, 0.974, 20), (0.004, 0.972, 22), (0.004, 0.973, 21)),
    'Gradient Boosting (N=100)': ((0.006, 0.955, 35), (0.005, 0.978, 17), (0.004, 0.974, 20), (0.004, 0.981, 15)),
    'Gradient Boosting (N=200)': ((0.005, 0.956, 34), (0.004, 0.983, 13), (0.004, 0.977, 18), (0.004, 0.983, 13)),
    'AdaBoost (N=25)': ((0.008, 0.922, 61), (0.006, 0.951, 38), (0.005, 0.951, 38), (0.005, 0.967, 26)),
    'AdaBoost (N=50)': ((0.008, 0.923, 60), (0.006, 0.962, 30), (0.005, 0.955, 35), (0.004, 0.96, 31)),
    'AdaBoost (N=100)': ((0.008, 0.923, 60), (0.006, 0.964, 28), (0.006, 0.959, 32), (0.004, 0.963, 29)),
    'AdaBoost (N=200)': ((0.008, 0.923, 60), (0.005, 0.963, 29), (0.005, 0.958, 33), (0.004, 0.964, 28)),
    'SVR (RBF kernel)': ((0.008, 0.936, 50), (0.006, 0.967, 26), (0.004, 0.977, 18), (0.004, 0.978, 17)),
    'SVR (Polynomial kernel)': ((0.01, 0.937, 49), (0.005, 0.964, 28), (0.005, 0.965, 27), (0.005, 0.968, 25)),
    'SVR (Linear kernel)': ((0.013, 0.921, 62), (0.008, 0.95, 39), (0.007, 0.969, 24), (0.006, 0.965, 27)),
    'Random Forest (N=25)': ((0.006, 0.946, 42), (0.004, 0.978, 17), (0.004, 0.972, 22), (0.004, 0.976, 19)),
    'Random Forest (N=50)': ((0.006, 0.953, 37), (0.004, 0.976, 19), (0.004, 0.969, 24), (0.004, 0.977, 18)),
    'Random Forest (N=100)': ((0.006, 0.945, 43), (0.004, 0.978, 17), (0.004, 0.974, 20), (0.004, 0.977, 18)),
    'Random Forest (N=200)': ((0.006, 0.951, 38), (0.004, 0.976, 19), (0.005, 0.972, 22), (0.004, 0.978, 17)),
}

LEFT = {
    'Linear Regression': ((0.028, 0.832, 32), (0.023, 0.905, 18), (0.018, 0.926, 14), (0.011, 0.926, 14)),
    'Linear Regression (D=0.5)': ((0.026, 0.837, 31), (0.018, 0.837, 31), (0.013, 0.879, 23), (0.008, 0.937, 12)),
    'Linear Regression (D=0.25)': ((0.021, 0.842, 30), (0.013, 0.911, 17), (0.008, 0.932, 13), (0.006, 0.942, 11)),
    'Linear Regression (D=2)': ((0.029, 0.832, 32), (0.024, 0.905, 18), (0.019, 0.926, 14), (0.013, 0.926, 14)),
    'Linear Regression (Exp)': ((0.03, 0.832, 32), (0.025, 0.889, 21), (0.02, 0.926, 14), (0.011, 0.916, 16)),
    'Linear Regression (Log)': ((0.027, 0.837, 31), (0.021, 0.905, 18), (0.015, 0.916, 16), (0.009, 0.932, 13)),
    'Linear Regression (Sigmoid)': ((0.026, 0.837, 31), (0.018, 0.837, 31), (0.013, 0.874, 24), (0.009, 0.942, 11)),
    'SVR (Polynomial kernel)': ((0.017, 0.816, 35), (0.027, 0.758, 46), (0.027, 0.832, 32), (0.031, 0.805, 37)),
    'SVR (Linear kernel)': ((0.027, 0.832, 32), (0.021, 0.863, 26), (0.018, 0.911, 17), (0.013, 0.932, 13)),
}

RIGHT = {
    'Linear Regression': ((0.015, 0.847, 29), (0.009, 0.826, 33), (0.008, 0.858, 27), (0.007, 0.863, 26)),
    'Linear Regression (D=0.5)': ((0.014, 0.853, 28), (0.009, 0.842, 30), (0.007, 0.847, 29), (0.007, 0.853, 28)),
    'Linear Regression (D=0.25)': ((0.011, 0.853, 28), (0.014, 0.832, 32), (0.013, 0.826, 33), (0.014, 0.816, 35)),
    'Linear Regression (D=2)': ((0.017, 0.853, 28), (0.01, 0.826, 33), (0.009, 0.837, 31), (0.007, 0.863, 26)),
    'Linear Regression (Exp)': ((0.019, 0.847, 29), (0.011, 0.816, 35), (0.009, 0.811, 36), (0.008, 0.847, 29)),
    'Linear Regression (Log)': ((0.014, 0.853, 28), (0.008, 0.842, 30), (0.007, 0.853, 28), (0.007, 0.858, 27)),
    'Linear Regression (Sigmoid)': ((0.014, 0.853, 28), (0.008, 0.842, 30), (0.007, 0.853, 28), (0.007, 0.863, 26)),
    'SVR (Polynomial kernel)': ((0.018, 0.879, 23), (0.017, 0.879, 23), (0.015, 0.842, 30), (0.018, 0.837, 31)),
    'SVR (Linear kernel)': ((0.016, 0.853, 28), (0.009, 0.837, 31), (0.008, 0.832, 32), (0.007, 0.842, 30)),
}

DUAL = {
    'Linear Regression': ((0.033, 0.958, 8), (0.024, 0.979, 4), (0.015, 0.947, 10), (0.013, 0.932, 13)),
    'Linear Regression (D=0.5)': ((0.033, 0.963, 7), (0.023, 0.979, 4), (0.013, 0.937, 12), (0.011, 0.932, 13)),
    'Linear Regression (D=0.25)': ((0.032, 0.963, 7), (0.017, 0.968, 6), (0.014, 0.968, 6), (0.009, 0.942, 11)),
    'Linear Regression (D=2)': ((0.033, 0.963, 7), (0.028, 0.989, 2), (0.018, 0.963, 7), (0.016, 0.953, 9)),
    'Linear Regression (Exp)': ((0.034, 0.963, 7), (0.021, 0.963, 7), (0.016, 0.947, 10), (0.014, 0.926, 14)),
    'Linear Regression (Log)': ((0.033, 0.958, 8), (0.02, 0.963, 7), (0.014, 0.937, 12), (0.012, 0.942, 11)),
    'Linear Regression (Sigmoid)': ((0.033, 0.963, 7), (0.023, 0.974, 5), (0.014, 0.947, 10), (0.011, 0.926, 14)),
    'SVR (Polynomial kernel)': ((0.023, 0.858, 27), (0.013, 0.905, 18), (0.017, 0.932, 13), (0.013, 0.921, 15)),
    'SVR (Linear kernel)': ((0.029, 0.953, 9), (0.021, 0.958, 8), (0.016, 0.947, 10), (0.012, 0.963, 7)),
}

TEST_SIZES = {'BASELINE': 40, 'ABLATION': 40, 'LEFT': 20, 'RIGHT': 20, 'DUAL': 20}
