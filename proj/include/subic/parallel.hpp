#pragma once

namespace subic::par {

// Execution mode for the data-parallel kernels. Every kernel has a serial
// reference implementation and an OpenMP one; both produce bit-identical
// results because each output element is computed independently with a fixed
// accumulation order. The serial path is kept for testing and as the
// baseline in the kernel benchmark.
enum class Mode { serial, openmp };

void set_mode(Mode m);
Mode mode();

// 0 means "let the OpenMP runtime decide".
void set_threads(int t);
int threads();

}  // namespace subic::par
