#pragma once

// Umbrella header for the whole pipeline: dataset loading, min-max
// normalization, weighted-average centroid seeding, Lloyd's k-means, and the
// benchmark harness.

#include "nkmeans/benchmark.hpp"
#include "nkmeans/centroid_init.hpp"
#include "nkmeans/clustering.hpp"
#include "nkmeans/dataset.hpp"
#include "nkmeans/preprocessing.hpp"
