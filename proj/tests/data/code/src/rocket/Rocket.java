package edu.sim.rocket;

public class Rocket {
    private double g0 = 9.80665;
    private double mass = 500.0;
    private double thrust;

    public double exhaustVelocity(double isp) {
        return isp * g0;
    }

    public double deltaV(double isp, double m0, double mf) {
        return isp * g0 * Math.log(m0 / mf);
    }

    public double thrustFrom(double mdot, double ve) {
        return mdot * ve;
    }

    public double burnTime(double propellant, double mdot) {
        return propellant / mdot;
    }

    public double thrustToWeight() {
        return thrust / (mass * g0);
    }

    public void setThrust(double t) {
        thrust = t;
    }

    public double massRatio(double dv, double isp) {
        double ve = exhaustVelocity(isp);
        return Math.exp(dv / ve);
    }

    public double stagedDeltaV(double isp, double m0, double m1, double m2) {
        double first = deltaV(isp, m0, m1);
        double second = deltaV(isp, m1, m2);
        return first + second;
    }
}
