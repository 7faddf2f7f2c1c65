"""CIPS critical values (lower tail) simulated under independent driftless
random walks, truncated CADF t-ratios, no augmentation lags.

Generated by scripts/build_cips_table.py with reps=10000, seed=20070101.
Rows index N, columns index T (number of time observations per unit).
"""

GRID_N = (10, 15, 20, 30, 50, 70, 100, 200)
GRID_T = (10, 15, 20, 30, 50, 70, 100, 200)

VALUES = {
    'intercept': {
        0.01: (
            (-2.849, -2.663, -2.596, -2.54, -2.54, -2.575, -2.549, -2.54),
            (-2.671, -2.519, -2.461, -2.435, -2.429, -2.415, -2.415, -2.416),
            (-2.57, -2.442, -2.383, -2.375, -2.362, -2.362, -2.352, -2.348),
            (-2.453, -2.34, -2.31, -2.301, -2.292, -2.274, -2.296, -2.297),
            (-2.357, -2.258, -2.235, -2.232, -2.227, -2.242, -2.223, -2.233),
            (-2.337, -2.221, -2.204, -2.2, -2.196, -2.205, -2.196, -2.197),
            (-2.294, -2.184, -2.178, -2.161, -2.166, -2.176, -2.178, -2.179),
            (-2.236, -2.156, -2.146, -2.137, -2.136, -2.145, -2.145, -2.149),
        ),
        0.05: (
            (-2.477, -2.383, -2.35, -2.315, -2.325, -2.338, -2.315, -2.318),
            (-2.354, -2.275, -2.253, -2.252, -2.239, -2.251, -2.242, -2.256),
            (-2.294, -2.233, -2.198, -2.206, -2.203, -2.2, -2.194, -2.206),
            (-2.213, -2.155, -2.154, -2.152, -2.157, -2.149, -2.163, -2.158),
            (-2.172, -2.108, -2.102, -2.111, -2.105, -2.112, -2.114, -2.13),
            (-2.13, -2.082, -2.081, -2.086, -2.094, -2.094, -2.095, -2.101),
            (-2.103, -2.062, -2.07, -2.068, -2.073, -2.082, -2.083, -2.084),
            (-2.084, -2.042, -2.045, -2.053, -2.057, -2.063, -2.07, -2.073),
        ),
        0.1: (
            (-2.281, -2.235, -2.218, -2.194, -2.212, -2.22, -2.207, -2.201),
            (-2.199, -2.153, -2.135, -2.146, -2.145, -2.145, -2.145, -2.155),
            (-2.153, -2.115, -2.099, -2.101, -2.114, -2.106, -2.11, -2.122),
            (-2.099, -2.057, -2.062, -2.071, -2.071, -2.075, -2.084, -2.083),
            (-2.065, -2.021, -2.029, -2.04, -2.042, -2.043, -2.05, -2.061),
            (-2.029, -2.003, -2.011, -2.021, -2.034, -2.031, -2.034, -2.036),
            (-2.009, -1.992, -2.002, -2.009, -2.016, -2.024, -2.026, -2.033),
            (-1.996, -1.981, -1.988, -1.998, -2.007, -2.007, -2.016, -2.019),
        ),
    },
    'intercept_trend': {
        0.01: (
            (-3.486, -3.231, -3.149, -3.086, -3.056, -3.045, -3.053, -3.025),
            (-3.332, -3.077, -3.02, -2.937, -2.914, -2.909, -2.914, -2.907),
            (-3.185, -2.967, -2.926, -2.878, -2.86, -2.86, -2.848, -2.84),
            (-3.088, -2.89, -2.831, -2.804, -2.784, -2.774, -2.779, -2.772),
            (-2.981, -2.814, -2.766, -2.74, -2.716, -2.704, -2.706, -2.715),
            (-2.943, -2.76, -2.713, -2.695, -2.678, -2.674, -2.673, -2.679),
            (-2.927, -2.74, -2.701, -2.662, -2.661, -2.655, -2.647, -2.65),
            (-2.864, -2.688, -2.656, -2.622, -2.617, -2.614, -2.617, -2.615),
        ),
        0.05: (
            (-3.084, -2.911, -2.888, -2.854, -2.841, -2.836, -2.838, -2.828),
            (-2.956, -2.81, -2.795, -2.758, -2.759, -2.752, -2.754, -2.74),
            (-2.884, -2.762, -2.727, -2.715, -2.708, -2.703, -2.703, -2.705),
            (-2.817, -2.707, -2.668, -2.666, -2.657, -2.651, -2.652, -2.652),
            (-2.742, -2.643, -2.624, -2.611, -2.606, -2.605, -2.608, -2.614),
            (-2.724, -2.616, -2.591, -2.589, -2.585, -2.581, -2.584, -2.585),
            (-2.707, -2.595, -2.576, -2.561, -2.569, -2.565, -2.563, -2.572),
            (-2.671, -2.57, -2.546, -2.54, -2.54, -2.543, -2.548, -2.545),
        ),
        0.1: (
            (-2.877, -2.756, -2.749, -2.735, -2.726, -2.731, -2.734, -2.724),
            (-2.778, -2.686, -2.677, -2.662, -2.665, -2.664, -2.669, -2.657),
            (-2.725, -2.648, -2.626, -2.624, -2.626, -2.623, -2.624, -2.626),
            (-2.675, -2.604, -2.58, -2.588, -2.585, -2.583, -2.584, -2.591),
            (-2.621, -2.55, -2.547, -2.547, -2.548, -2.547, -2.55, -2.556),
            (-2.607, -2.537, -2.524, -2.527, -2.531, -2.532, -2.533, -2.535),
            (-2.586, -2.521, -2.512, -2.507, -2.517, -2.518, -2.517, -2.522),
            (-2.563, -2.499, -2.487, -2.492, -2.495, -2.499, -2.504, -2.503),
        ),
    },
}
