package edu.sim.orbit;

public class Orbital {
    private double mu = 3.986004418e14;

    public double getMu() {
        return mu;
    }

    public double orbitalVelocity(double r) {
        return Math.sqrt(mu / r);
    }

    public double period(double a) {
        return 2.0 * Math.PI * Math.sqrt(a * a * a / mu);
    }

    public double escapeVelocity(double r) {
        return Math.sqrt(2.0 * mu / r);
    }

    // vis-viva equation
    public double visViva(double r, double a) {
        return Math.sqrt(mu * (2.0 / r - 1.0 / a));
    }

    public double hohmannFirstBurn(double r1, double r2) {
        double v1 = orbitalVelocity(r1);
        double transfer = Math.sqrt(2.0 * r2 / (r1 + r2));
        return v1 * (transfer - 1.0);
    }

    public double semiMajorAxis(double rp, double ra) {
        return (rp + ra) / 2.0;
    }
}
