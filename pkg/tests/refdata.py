"""Reference benchmark summary used as frozen regression fixtures.

A 25-domain predictive-accuracy summary for the seven named cost
functions, with the published aggregate statistics the analytics
pipeline is expected to reproduce from it."""

DOMAIN_ACCURACY = {
    "error": [
        68.41666666666667, 97.3625, 55.333333333333336, 88.66666666666667, 99.06666666666666,
        96.11111111111111, 95.24137931034483, 100.0, 88.11111111111111, 99.43333333333334,
        99.99866666666667, 83.0, 98.44444444444444, 59.666666666666664, 54.333333333333336,
        98.33333333333333, 76.80272108843538, 99.58333333333333, 94.33333333333333, 100.0,
        82.625, 88.0, 87.0, 81.0, 98.83333333333333,
    ],
    "errorsize": [
        64.41666666666667, 97.47416666666666, 55.333333333333336, 88.66666666666667, 99.33333333333333,
        94.11111111111111, 96.07314524555903, 100.0, 87.88888888888889, 100.0,
        99.99866666666667, 83.0, 98.9074074074074, 60.0, 50.0,
        98.33333333333333, 78.77551020408163, 100.0, 94.83333333333333, 100.0,
        81.875, 88.0, 87.0, 81.0, 99.83333333333333,
    ],
    "mdl": [
        70.83333333333333, 97.68416666666667, 61.666666666666664, 88.85416666666667, 98.86666666666666,
        95.33333333333333, 95.59247648902821, 100.0, 82.88888888888889, 91.23333333333333,
        99.96266666666666, 81.0, 98.0, 59.666666666666664, 57.0,
        98.0, 1.836734693877551, 100.0, 94.0, 50.0,
        86.125, 88.0, 86.5, 81.0, 98.66666666666667,
    ],
    "fpfnsize": [
        58.166666666666664, 97.50583333333333, 48.0, 88.5625, 99.2,
        96.66666666666667, 94.31452455590387, 100.0, 74.0, 100.0,
        100.0, 50.0, 98.92592592592592, 56.666666666666664, 47.333333333333336,
        98.33333333333333, 78.57142857142857, 100.0, 93.83333333333333, 50.0,
        81.91666666666667, 83.0, 70.33333333333333, 81.0, 99.83333333333333,
    ],
    "fpfn": [
        57.916666666666664, 97.475, 49.0, 88.64583333333333, 99.2,
        96.22222222222223, 94.06478578892371, 100.0, 74.88888888888889, 98.66666666666667,
        100.0, 50.0, 98.5, 56.666666666666664, 46.666666666666664,
        98.33333333333333, 77.14285714285714, 99.58333333333333, 94.0, 50.0,
        83.04166666666667, 83.0, 69.83333333333333, 81.0, 98.41666666666667,
    ],
    "fnfp": [
        55.916666666666664, 95.76083333333334, 59.333333333333336, 88.27083333333333, 94.4,
        98.77777777777777, 87.22152560083595, 100.0, 88.22222222222223, 97.23333333333333,
        99.00533333333334, 56.0, 87.72222222222223, 42.666666666666664, 54.0,
        95.66666666666667, 75.85034013605443, 99.58333333333333, 74.33333333333333, 87.0,
        75.20833333333333, 62.0, 75.33333333333333, 71.66666666666667, 98.83333333333333,
    ],
    "fnfpsize": [
        55.833333333333336, 94.73333333333333, 58.666666666666664, 88.0625, 94.26666666666667,
        91.44444444444444, 85.91327063740857, 100.0, 87.77777777777777, 100.0,
        95.096, 47.666666666666664, 87.85185185185185, 42.666666666666664, 54.0,
        95.66666666666667, 78.63945578231292, 100.0, 74.5, 87.0,
        59.0, 60.0, 71.16666666666667, 81.0, 99.83333333333333,
    ],
}

# aggregate values the pipeline must reproduce (1e-3 on means)
EXPECTED_OVERALL_MEAN = {
    "error": 87.588,
    "errorsize": 87.394,
    "mdl": 82.508,
    "fpfnsize": 81.847,
    "fpfn": 81.691,
    "fnfp": 80.8,
    "fnfpsize": 79.631,
}

EXPECTED_RANK1 = {
    "errorsize": 15,
    "mdl": 10,
    "fpfnsize": 8,
    "error": 7,
    "fnfpsize": 5,
    "fpfn": 4,
    "fnfp": 3,
}

# pairwise accuracy correlations published for the same summary
EXPECTED_PEARSON_ERROR_ERRORSIZE = 0.9967
EXPECTED_PEARSON_MDL_FNFPSIZE = 0.4519
