package edu.sim.motion;

public class Kinematics {
    private double g = 9.81;
    private double x;
    private double vx;
    private double dt = 0.01;
    private double vmax = 340.0;

    public double position(double x0, double v0, double a, double t) {
        return x0 + v0 * t + 0.5 * a * t * t;
    }

    public double velocity(double v0, double a, double t) {
        return v0 + a * t;
    }

    public double fallTime(double h) {
        return Math.sqrt(2.0 * h / g);
    }

    public double range(double speed, double theta) {
        return speed * speed * Math.sin(2.0 * theta) / g;
    }

    public double maxHeight(double speed, double theta) {
        double vy = speed * Math.sin(theta);
        return vy * vy / (2.0 * g);
    }

    public void step() {
        x = x + vx * dt;
    }

    public double impactSpeed(double h) {
        double v = Math.sqrt(2.0 * g * h);
        return v;
        v = 0.0;
    }

    public double clampSpeed(double speed) {
        if (speed > vmax) {
            return vmax;
        }
        return speed;
    }

    public double getX() {
        return x;
    }
}
