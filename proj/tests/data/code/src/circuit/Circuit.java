package edu.sim.circuit;

public class Circuit {
    private double voltage = 12.0;
    private double resistance = 4.0;
    private double current;
    private double energy;
    private int phaseCount;

    public double currentFor(double v, double r) {
        return v / r;
    }

    public double power(double v, double i) {
        return v * i;
    }

    public double seriesResistance(double r1, double r2) {
        return r1 + r2;
    }

    public double parallelResistance(double r1, double r2) {
        return (r1 * r2) / (r1 + r2);
    }

    public double energyUsed(double p, double t) {
        return p * t;
    }

    public void solve() {
        current = voltage / resistance;
    }

    public void accumulate(double p, double t) {
        energy += p * t;
    }

    public int phases() {
        int k = 3;
        return k;
    }

    public void configure() {
        phaseCount = phases();
    }

    public double rmsVoltage(double peak) {
        double root2 = 1.4142135623730951;
        return peak / root2;
    }

    public double dividerOutput(double vin, double r1, double r2) {
        double ratio = r2 / (r1 + r2);
        double unused = ratio * 2.0;
        return vin * ratio;
    }
}
