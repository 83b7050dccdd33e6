#pragma once

namespace rslab {

// Neumaier variant of compensated summation: the compensation term also
// catches the case where the incoming value dominates the running sum.
struct kahan_accumulator {
    double sum = 0.0;
    double comp = 0.0;

    void add(double value) {
        double t = sum + value;
        if ((sum >= 0 ? sum : -sum) >= (value >= 0 ? value : -value))
            comp += (sum - t) + value;
        else
            comp += (value - t) + sum;
        sum = t;
    }

    // Merge a partial accumulator.  Merge order must be fixed by the caller
    // to keep results bit-reproducible.
    void merge(const kahan_accumulator& other) {
        add(other.sum);
        comp += other.comp;
    }

    double value() const { return sum + comp; }
};

}  // namespace rslab
