package edu.sim.thermo;

public class Thermo {
    private double gasR = 8.314;
    private double kelvinOffset = 273.15;
    private int samples;

    public double idealGasPressure(double n, double t, double volume) {
        return n * gasR * t / volume;
    }

    public double heatFlow(double k, double a, double dt, double dx) {
        return -k * a * dt / dx;
    }

    public double carnotEfficiency(double tc, double th) {
        return 1.0 - tc / th;
    }

    public double celsiusToKelvin(double c) {
        return c + kelvinOffset;
    }

    public double sumSeries(int n) {
        double s = 0.0;
        double term = 0.0;
        for (int i = 1; i <= n; i++) {
            term = 1.0 / (i * i);
            s = s + term;
        }
        return s;
    }

    public void countDown(int n) {
        while (n > 0) {
            n = n - 1;
        }
    }

    public void resetSamples() {
        for (int i = 0; i < 10; i++) {
            samples = i;
        }
    }

    public double kineticEnergy(double m, double speed) {
        double e = 0.0;
        e = 0.5 * m * speed * speed;
        return e;
    }

    public double internalEnergy(double cv, double t) {
        double u = cv * t;
        return u;
    }
}
